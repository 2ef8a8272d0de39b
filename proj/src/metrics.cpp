#include "gevreg/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gevreg {

std::pair<double, double> mae_mse_plus(const Eigen::VectorXd& pd, const Eigen::VectorXi& y) {
    if (pd.size() != y.size()) throw std::invalid_argument("mae_mse_plus: length mismatch");
    double mae = 0.0, mse = 0.0;
    long long nd = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 1) continue;
        const double e = std::fabs(1.0 - pd(i));
        mae += e;
        mse += e * e;
        ++nd;
    }
    if (nd == 0) throw std::invalid_argument("mae_mse_plus: no defaults present");
    return {mae / static_cast<double>(nd), mse / static_cast<double>(nd)};
}

double auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& y) {
    if (scores.size() != y.size()) throw std::invalid_argument("auc: length mismatch");
    const auto n = scores.size();
    long long nd = 0;
    for (Eigen::Index i = 0; i < n; ++i) nd += y(i) == 1 ? 1 : 0;
    const long long ng = static_cast<long long>(n) - nd;
    if (nd == 0 || ng == 0) throw std::invalid_argument("auc: both classes must be present");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return scores(a) < scores(b); });

    // midranks over tie groups, then the Mann-Whitney identity
    double rank_sum_defaults = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores(order[j + 1]) == scores(order[i])) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) {
            if (y(order[k]) == 1) rank_sum_defaults += midrank;
        }
        i = j + 1;
    }
    const double ndd = static_cast<double>(nd);
    return (rank_sum_defaults - ndd * (ndd + 1.0) / 2.0) / (ndd * static_cast<double>(ng));
}

MetricsReport evaluate_predictions(const Eigen::VectorXd& pd, const Eigen::VectorXi& y) {
    MetricsReport r;
    const auto [mae, mse] = mae_mse_plus(pd, y);
    r.mae_plus = mae;
    r.mse_plus = mse;
    r.auc = auc(pd, y);
    r.n_total = static_cast<long long>(y.size());
    r.n_defaults = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) r.n_defaults += y(i) == 1 ? 1 : 0;
    return r;
}

Comparison compare_models(const std::vector<NamedReport>& reports) {
    if (reports.size() < 2) throw std::invalid_argument("compare_models: at least 2 reports required");
    Comparison c;
    c.rows = reports;
    double best_mae = reports[0].report.mae_plus;
    double best_mse = reports[0].report.mse_plus;
    double best_auc = reports[0].report.auc;
    for (const auto& r : reports) {
        best_mae = std::min(best_mae, r.report.mae_plus);
        best_mse = std::min(best_mse, r.report.mse_plus);
        best_auc = std::max(best_auc, r.report.auc);
    }
    for (const auto& r : reports) {
        c.best_mae.push_back(r.report.mae_plus == best_mae);
        c.best_mse.push_back(r.report.mse_plus == best_mse);
        c.best_auc.push_back(r.report.auc == best_auc);
    }
    return c;
}

namespace {

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::string comparison_csv(const Comparison& c) {
    std::ostringstream out;
    out << "name,mae_plus,mse_plus,auc,n_defaults,n_total,best_mae_plus,best_mse_plus,best_auc\n";
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        const auto& r = c.rows[i];
        out << r.name << ',' << shortest(r.report.mae_plus) << ',' << shortest(r.report.mse_plus) << ','
            << shortest(r.report.auc) << ',' << r.report.n_defaults << ',' << r.report.n_total << ','
            << (c.best_mae[i] ? 1 : 0) << ',' << (c.best_mse[i] ? 1 : 0) << ',' << (c.best_auc[i] ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string comparison_text(const Comparison& c) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(4);
    std::size_t w = 10;
    for (const auto& r : c.rows) w = std::max(w, r.name.size() + 2);
    out << std::left;
    out.width(static_cast<std::streamsize>(w));
    out << "model";
    out << std::right << "      MAE+       MSE+        AUC\n";
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        const auto& r = c.rows[i];
        out << std::left;
        out.width(static_cast<std::streamsize>(w));
        out << r.name << std::right;
        auto cell = [&](double v, bool best) {
            std::ostringstream s;
            s.setf(std::ios::fixed);
            s.precision(4);
            s << v << (best ? "*" : " ");
            out.width(11);
            out << s.str();
        };
        cell(r.report.mae_plus, c.best_mae[i]);
        cell(r.report.mse_plus, c.best_mse[i]);
        cell(r.report.auc, c.best_auc[i]);
        out << '\n';
    }
    out << "(* best per column; lower is better for MAE+/MSE+, higher for AUC)\n";
    return out.str();
}

}  // namespace gevreg
