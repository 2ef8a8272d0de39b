#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "gevreg/dataset.hpp"
#include "gevreg/links.hpp"
#include "gevreg/smooth.hpp"

namespace gevreg {

struct SmoothTermSpec {
    std::string name;
    int basis_dim = 10;
};

// Model structure: eta = alpha + sum(beta_j * x_j) + sum(s_j(x_j)).
// The intercept is always included.
struct ModelSpec {
    LinkSpec link;
    std::vector<std::string> linear_terms;
    std::vector<SmoothTermSpec> smooth_terms;
};

struct LambdaPolicy {
    enum class Mode { Fixed, Select };
    Mode mode = Mode::Select;
    std::vector<double> values;  // one per smooth term when Fixed

    static LambdaPolicy select() { return {Mode::Select, {}}; }
    static LambdaPolicy fixed(std::vector<double> v) { return {Mode::Fixed, std::move(v)}; }
};

struct FittedSmooth {
    BasisBlock block;       // lattice, Z, penalty, lambda; B is dropped after fitting
    Eigen::VectorXd gamma;  // K-1 centered coefficients
    double edf = 0.0;
    int est_rank = 0;       // rank of the centered term block, K-1
    double p_value = 1.0;   // Wald statistic on gamma against est_rank (chi-square)
};

struct FittedModel {
    ModelSpec spec;
    double alpha = 0.0;
    Eigen::VectorXd beta;  // linear coefficients in spec order
    std::vector<FittedSmooth> smooths;
    Eigen::VectorXd lambdas;     // per smooth term
    double tau = 0.0;            // copy of the link's tau (0 unless GEV)
    Eigen::VectorXd std_errors;  // intercept + linear, from inverse penalized Fisher information
    Eigen::VectorXd p_values;    // intercept + linear, two-sided Wald
    double deviance = 0.0;       // -2 log-likelihood
    bool converged = false;
    int iterations = 0;
    Eigen::MatrixXd cov;  // (X'WX + S_lambda)^{-1} at convergence
    int n_train = 0;
    double edf_total = 0.0;  // parametric count + sum of smooth Edf
    double gcv = 0.0;        // n * deviance / (n - edf_total)^2
};

// Assembled design: columns [intercept | linear terms | centered smooth blocks].
struct Design {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    LinkSpec link;
    int n_parametric = 1;
    std::vector<BasisBlock> blocks;
    std::vector<std::pair<int, int>> smooth_ranges;  // column ranges [begin, end)
};

Design assemble_design(const Dataset& ds, const ModelSpec& spec);

double deviance_at(const Design& d, const Eigen::VectorXd& beta);
double penalized_deviance(const Design& d, const Eigen::VectorXd& beta, const Eigen::VectorXd& lambdas);
// gradient of the penalized log-likelihood X'u - S_lambda beta,
// u_i = (y_i - mu_i) (dmu/deta)_i / (mu_i (1 - mu_i))
Eigen::VectorXd penalized_score(const Design& d, const Eigen::VectorXd& beta, const Eigen::VectorXd& lambdas);

// Penalized IRLS with step-halving (max 30 halvings per step, max 200
// iterations). Convergence: relative penalized-deviance change < 1e-8 with a
// vanishing penalized score. Non-convergence is reported through the
// converged flag, not an exception.
FittedModel fit(const Dataset& ds, const ModelSpec& spec, const LambdaPolicy& lambdas = LambdaPolicy::select());

// Coordinate-wise GCV grid search, log10(lambda) in {-3,...,6}, two sweeps,
// GCV = n * deviance / (n - total Edf)^2. Deterministic.
std::vector<double> select_lambda(const Dataset& ds, const ModelSpec& spec);

// In-sample deviance minimizer over a tau grid; ties go to the tau closest
// to 0. Every grid fit uses the given lambda policy. A single-point grid is
// returned unconditionally.
double select_tau(const Dataset& ds, const ModelSpec& spec, const std::vector<double>& grid,
                  const LambdaPolicy& lambdas = LambdaPolicy::select());

// {-1.00, -0.95, ..., -0.05}
std::vector<double> default_tau_grid();

// PD per row; smooth covariates are clamped to the training knot range.
// Throws on absent covariate columns or missing cells.
Eigen::VectorXd predict(const FittedModel& model, const Dataset& ds);

struct CoefRow {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double p_value = 1.0;
};

struct SmoothRow {
    std::string name;
    double edf = 0.0;
    int est_rank = 0;
    double p_value = 1.0;
    bool effectively_linear = false;  // Edf ~ 1: belongs with the parametric narrative
};

struct ModelSummary {
    std::vector<CoefRow> parametric;  // intercept first, then linear terms
    std::vector<SmoothRow> smooths;
    double deviance = 0.0;
    double tau = 0.0;
    std::string link;
    double edf_total = 0.0;
    int n = 0;
};

// Requires a converged model.
ModelSummary summarize(const FittedModel& model);
std::string summary_text(const ModelSummary& s);

struct SmoothCurve {
    Eigen::VectorXd x;
    Eigen::VectorXd fit;
    Eigen::VectorXd lo95;
    Eigen::VectorXd hi95;
};

// Pointwise 95% band: fit +- 1.96 * SE from the penalized covariance of gamma.
SmoothCurve smooth_curve(const FittedModel& model, const std::string& term, int grid_size);

}  // namespace gevreg
