#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace gevreg {

// Defaults-only error measures plus rank-order performance.
struct MetricsReport {
    double mae_plus = 0.0;  // mean over defaults of |1 - PD|
    double mse_plus = 0.0;  // mean over defaults of (1 - PD)^2
    double auc = 0.0;
    long long n_defaults = 0;
    long long n_total = 0;
};

// Averages over rows with y = 1 only; requires at least one default.
std::pair<double, double> mae_mse_plus(const Eigen::VectorXd& pd, const Eigen::VectorXi& y);

// Mann-Whitney AUC with midranks for ties; requires both classes.
double auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& y);

MetricsReport evaluate_predictions(const Eigen::VectorXd& pd, const Eigen::VectorXi& y);

struct NamedReport {
    std::string name;
    MetricsReport report;
};

// Comparison table: one row per report, best value per column flagged
// (ties flag every holder). Lower is better for the error columns, higher
// for AUC.
struct Comparison {
    std::vector<NamedReport> rows;
    std::vector<bool> best_mae;
    std::vector<bool> best_mse;
    std::vector<bool> best_auc;
};

Comparison compare_models(const std::vector<NamedReport>& reports);
std::string comparison_csv(const Comparison& c);
std::string comparison_text(const Comparison& c);

}  // namespace gevreg
