#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gevreg/dataset.hpp"
#include "gevreg/fit.hpp"

namespace gevreg {

struct ImputationPolicy {
    int m = 5;           // completed datasets
    int iterations = 10; // FCS sweeps per dataset
    std::uint64_t seed = 0;
    bool noise = true;   // stochastic residual draws
};

struct ImputationResult {
    std::vector<Dataset> completed;
    std::vector<std::string> diagnostics;  // e.g. collinearity fallbacks
};

// Fully conditional specification: initialize missing cells with column
// means, then sweep the incomplete columns, each regressed by least squares
// on all other columns plus the response. Observed cells never change; the m
// chains run from independent sub-seeds of policy.seed.
ImputationResult impute_fcs(const Dataset& ds, const ImputationPolicy& policy);

// Arithmetic mean of the m models' prediction vectors on one dataset.
// All models must share the same spec.
Eigen::VectorXd pool_predictions(const std::vector<FittedModel>& models, const Dataset& ds);

// Rubin's rules over the parametric coefficients, for reporting:
// pooled estimate = mean, variance = within + (1 + 1/m) between.
struct PooledCoef {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
};
std::vector<PooledCoef> rubin_pool(const std::vector<FittedModel>& models);

}  // namespace gevreg
