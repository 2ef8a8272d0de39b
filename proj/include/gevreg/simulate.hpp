#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gevreg/dataset.hpp"
#include "gevreg/links.hpp"

namespace gevreg {

// Covariate sampling distribution: Uniform(a, b) or Normal(mean=a, sd=b).
struct CovariateDist {
    enum class Kind { Uniform, Normal };
    Kind kind = Kind::Uniform;
    double a = 0.0;
    double b = 1.0;

    static CovariateDist uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
    static CovariateDist normal(double mean, double sd) { return {Kind::Normal, mean, sd}; }
};

struct LinearEffect {
    std::string name;
    double coef = 0.0;
    CovariateDist dist;
};

// Named truth function applied to the covariate and added to eta with the
// given scale. Available truths: identity, sin2pi, quadratic, cubic, bump,
// sigmoid (see truth_value).
struct SmoothEffect {
    std::string name;
    std::string truth = "identity";
    double scale = 1.0;
    CovariateDist dist;
};

// MAR descriptor: cell (i, j) for j in `columns` goes missing with
// probability clamp(rate * (1 + strength * z_i), 0, 1) where z_i is the
// standardized value of the always-observed `anchor` column. Empty anchor or
// strength 0 gives MCAR at `rate`.
struct MissingSpec {
    std::vector<std::string> columns;
    std::string anchor;
    double rate = 0.0;
    double strength = 0.0;
};

struct SimSpec {
    int n = 0;
    double intercept = 0.0;
    std::vector<LinearEffect> linear;
    std::vector<SmoothEffect> smooth;
    LinkSpec link = LinkSpec::logit();
    MissingSpec missing;
    std::uint64_t seed = 0;
};

double truth_value(const std::string& truth, double x);

// Draw covariates, compute eta = intercept + sum(coef*x) + sum(scale*truth(x)),
// set y ~ Bernoulli(inverse link of eta), then inject missingness per the MAR
// descriptor. Deterministic in spec.seed.
Dataset simulate(const SimSpec& spec);

}  // namespace gevreg
