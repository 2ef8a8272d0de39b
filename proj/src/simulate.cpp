#include "gevreg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "gevreg/rng.hpp"

namespace gevreg {

double truth_value(const std::string& truth, double x) {
    if (truth == "identity") return x;
    if (truth == "sin2pi") return std::sin(6.283185307179586476925286766559 * x);
    if (truth == "quadratic") return x * x;
    if (truth == "cubic") return x * x * x;
    if (truth == "bump") return std::exp(-8.0 * (x - 0.5) * (x - 0.5));
    if (truth == "sigmoid") return 1.0 / (1.0 + std::exp(-10.0 * (x - 0.5)));
    throw std::invalid_argument("truth_value: unknown truth '" + truth + "'");
}

namespace {

double draw_covariate(const CovariateDist& d, Rng& rng) {
    switch (d.kind) {
        case CovariateDist::Kind::Uniform: return rng.uniform(d.a, d.b);
        case CovariateDist::Kind::Normal: return rng.normal(d.a, d.b);
    }
    throw std::logic_error("draw_covariate: unknown distribution");
}

}  // namespace

Dataset simulate(const SimSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("simulate: n >= 1 required");
    if (!(spec.missing.rate >= 0.0) || !(spec.missing.rate < 1.0)) {
        throw std::invalid_argument("simulate: missing rate must lie in [0, 1)");
    }
    if (spec.linear.empty() && spec.smooth.empty()) {
        throw std::invalid_argument("simulate: at least one covariate effect required");
    }

    std::vector<std::string> names;
    for (const auto& e : spec.linear) names.push_back(e.name);
    for (const auto& e : spec.smooth) names.push_back(e.name);
    std::unordered_set<std::string> seen(names.begin(), names.end());
    if (seen.size() != names.size()) throw std::invalid_argument("simulate: duplicate covariate names");

    const int p = static_cast<int>(names.size());
    Eigen::MatrixXd x(spec.n, p);
    Eigen::VectorXi y(spec.n);

    Rng rng(derive_seed(spec.seed, 0));
    for (int i = 0; i < spec.n; ++i) {
        double eta = spec.intercept;
        int j = 0;
        for (const auto& e : spec.linear) {
            const double v = draw_covariate(e.dist, rng);
            x(i, j++) = v;
            eta += e.coef * v;
        }
        for (const auto& e : spec.smooth) {
            const double v = draw_covariate(e.dist, rng);
            x(i, j++) = v;
            eta += e.scale * truth_value(e.truth, v);
        }
        y(i) = rng.bernoulli(link_inverse(spec.link, eta));
    }

    Dataset ds = Dataset::make(std::move(names), std::move(x), std::move(y));

    if (spec.missing.rate > 0.0 && !spec.missing.columns.empty()) {
        Rng miss_rng(derive_seed(spec.seed, 1));
        Eigen::VectorXd z = Eigen::VectorXd::Zero(spec.n);
        if (!spec.missing.anchor.empty() && spec.missing.strength != 0.0) {
            for (const auto& c : spec.missing.columns) {
                if (c == spec.missing.anchor) {
                    throw std::invalid_argument("simulate: anchor column must stay observed");
                }
            }
            const int aj = ds.col(spec.missing.anchor);
            const double mean = ds.x.col(aj).mean();
            const double sd = std::sqrt((ds.x.col(aj).array() - mean).square().sum() /
                                        std::max(1, spec.n - 1));
            if (sd > 0.0) z = (ds.x.col(aj).array() - mean) / sd;
        }
        for (const auto& c : spec.missing.columns) {
            const int j = ds.col(c);
            for (int i = 0; i < spec.n; ++i) {
                const double pm = std::clamp(spec.missing.rate * (1.0 + spec.missing.strength * z(i)), 0.0, 1.0);
                if (miss_rng.uniform01() < pm) ds.x(i, j) = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }
    return ds;
}

}  // namespace gevreg
