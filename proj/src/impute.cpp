#include "gevreg/impute.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gevreg/rng.hpp"

namespace gevreg {

namespace {

struct ColumnInfo {
    std::vector<int> observed;
    std::vector<int> missing;
    double mean = 0.0;
};

}  // namespace

ImputationResult impute_fcs(const Dataset& ds, const ImputationPolicy& policy) {
    if (policy.m < 1) throw std::invalid_argument("impute_fcs: m >= 1 required");
    if (policy.iterations < 1) throw std::invalid_argument("impute_fcs: iterations >= 1 required");

    const int n = ds.n();
    const int p = ds.p();

    std::vector<ColumnInfo> cols(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        auto& c = cols[static_cast<std::size_t>(j)];
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (ds.is_missing(i, j)) {
                c.missing.push_back(i);
            } else {
                c.observed.push_back(i);
                sum += ds.x(i, j);
            }
        }
        if (c.observed.size() < 2) {
            throw std::invalid_argument("impute_fcs: feature '" + ds.feature_names[static_cast<std::size_t>(j)] +
                                        "' has fewer than 2 observed values");
        }
        c.mean = sum / static_cast<double>(c.observed.size());
    }

    ImputationResult result;
    const Eigen::VectorXd yv = ds.y.cast<double>();

    for (int chain = 0; chain < policy.m; ++chain) {
        Rng rng(derive_seed(policy.seed, static_cast<std::uint64_t>(chain)));
        Eigen::MatrixXd X = ds.x;
        for (int j = 0; j < p; ++j) {
            for (int i : cols[static_cast<std::size_t>(j)].missing) X(i, j) = cols[static_cast<std::size_t>(j)].mean;
        }

        for (int it = 0; it < policy.iterations; ++it) {
            for (int j = 0; j < p; ++j) {
                const auto& c = cols[static_cast<std::size_t>(j)];
                if (c.missing.empty()) continue;

                // design: intercept, all other columns (current fill-in), y
                const auto n_obs = static_cast<Eigen::Index>(c.observed.size());
                Eigen::MatrixXd A(n_obs, p + 1);
                Eigen::VectorXd b(n_obs);
                for (Eigen::Index r = 0; r < n_obs; ++r) {
                    const int i = c.observed[static_cast<std::size_t>(r)];
                    A(r, 0) = 1.0;
                    int cc = 1;
                    for (int k = 0; k < p; ++k) {
                        if (k != j) A(r, cc++) = X(i, k);
                    }
                    A(r, p) = yv(i);
                    b(r) = X(i, j);
                }

                Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
                if (qr.rank() < A.cols()) {
                    for (int i : c.missing) X(i, j) = c.mean;
                    result.diagnostics.push_back("chain " + std::to_string(chain + 1) + " sweep " +
                                                 std::to_string(it + 1) + ": column '" +
                                                 ds.feature_names[static_cast<std::size_t>(j)] +
                                                 "' collinear, fell back to mean imputation");
                    continue;
                }
                const Eigen::VectorXd coef = qr.solve(b);
                double sd = 0.0;
                if (policy.noise) {
                    const double rss = (b - A * coef).squaredNorm();
                    const auto dof = std::max<Eigen::Index>(1, n_obs - A.cols());
                    sd = std::sqrt(rss / static_cast<double>(dof));
                }

                for (int i : c.missing) {
                    double pred = coef(0);
                    int cc = 1;
                    for (int k = 0; k < p; ++k) {
                        if (k != j) pred += coef(cc++) * X(i, k);
                    }
                    pred += coef(p) * yv(i);
                    if (policy.noise) pred += sd * rng.normal();
                    X(i, j) = pred;
                }
            }
        }
        result.completed.push_back(Dataset::make(ds.feature_names, std::move(X), ds.y));
    }
    return result;
}

Eigen::VectorXd pool_predictions(const std::vector<FittedModel>& models, const Dataset& ds) {
    if (models.empty()) throw std::invalid_argument("pool_predictions: no models");
    const FittedModel& first = models.front();
    for (const auto& m : models) {
        const bool same_link = m.spec.link.kind == first.spec.link.kind && m.spec.link.tau == first.spec.link.tau;
        bool same_terms = m.spec.linear_terms == first.spec.linear_terms &&
                          m.spec.smooth_terms.size() == first.spec.smooth_terms.size();
        if (same_terms) {
            for (std::size_t t = 0; t < m.spec.smooth_terms.size(); ++t) {
                same_terms &= m.spec.smooth_terms[t].name == first.spec.smooth_terms[t].name &&
                              m.spec.smooth_terms[t].basis_dim == first.spec.smooth_terms[t].basis_dim;
            }
        }
        if (!same_link || !same_terms) throw std::invalid_argument("pool_predictions: model specs differ");
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(ds.n());
    for (const auto& m : models) mean += predict(m, ds);
    return mean / static_cast<double>(models.size());
}

std::vector<PooledCoef> rubin_pool(const std::vector<FittedModel>& models) {
    if (models.empty()) throw std::invalid_argument("rubin_pool: no models");
    const auto m = static_cast<double>(models.size());
    const auto q = models.front().std_errors.size();
    std::vector<std::string> names;
    names.push_back("(Intercept)");
    for (const auto& t : models.front().spec.linear_terms) names.push_back(t);

    std::vector<PooledCoef> out;
    for (Eigen::Index j = 0; j < q; ++j) {
        double est = 0.0, within = 0.0;
        for (const auto& mod : models) {
            const double c = j == 0 ? mod.alpha : mod.beta(j - 1);
            est += c;
            within += mod.std_errors(j) * mod.std_errors(j);
        }
        est /= m;
        within /= m;
        double between = 0.0;
        if (models.size() > 1) {
            for (const auto& mod : models) {
                const double c = j == 0 ? mod.alpha : mod.beta(j - 1);
                between += (c - est) * (c - est);
            }
            between /= (m - 1.0);
        }
        out.push_back({names[static_cast<std::size_t>(j)], est, std::sqrt(within + (1.0 + 1.0 / m) * between)});
    }
    return out;
}

}  // namespace gevreg
