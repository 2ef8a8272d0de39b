#include "gevreg/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "gevreg/stats.hpp"

namespace gevreg {

namespace {

constexpr int kMaxIter = 200;
constexpr int kMaxHalvings = 30;
constexpr double kRelTol = 1e-8;
constexpr double kScoreTol = 1e-7;
constexpr double kDmuFloor = 1e-10;

void validate_spec(const ModelSpec& spec) {
    std::unordered_set<std::string> seen;
    for (const auto& t : spec.linear_terms) {
        if (!seen.insert(t).second) throw std::invalid_argument("ModelSpec: duplicate term '" + t + "'");
    }
    for (const auto& t : spec.smooth_terms) {
        if (!seen.insert(t.name).second) {
            throw std::invalid_argument("ModelSpec: covariate '" + t.name + "' appears in both term lists or twice");
        }
    }
}

// S_lambda * beta, smooth blocks only
Eigen::VectorXd penalty_times(const Design& d, const Eigen::VectorXd& beta, const Eigen::VectorXd& lambdas) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(beta.size());
    for (std::size_t t = 0; t < d.blocks.size(); ++t) {
        const auto [b, e] = d.smooth_ranges[t];
        out.segment(b, e - b) = lambdas(static_cast<Eigen::Index>(t)) * (d.blocks[t].S * beta.segment(b, e - b));
    }
    return out;
}

Eigen::MatrixXd penalty_matrix(const Design& d, const Eigen::VectorXd& lambdas) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d.X.cols(), d.X.cols());
    for (std::size_t t = 0; t < d.blocks.size(); ++t) {
        const auto [b, e] = d.smooth_ranges[t];
        S.block(b, b, e - b, e - b) = lambdas(static_cast<Eigen::Index>(t)) * d.blocks[t].S;
    }
    return S;
}

bool eta_feasible(const Design& d, const Eigen::VectorXd& eta) {
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        if (!eta_in_support(d.link, eta(i))) return false;
    }
    return true;
}

struct IrlsResult {
    Eigen::VectorXd beta;
    Eigen::VectorXd eta;
    Eigen::VectorXd mu;
    Eigen::VectorXd w;  // working weights at convergence
    double deviance = 0.0;
    double pen_deviance = 0.0;
    bool converged = false;
    int iterations = 0;
};

double bernoulli_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        ll += y(i) * std::log(mu(i)) + (1.0 - y(i)) * std::log(1.0 - mu(i));
    }
    return -2.0 * ll;
}

IrlsResult run_irls(const Design& d, const Eigen::VectorXd& lambdas) {
    const Eigen::Index n = d.X.rows();
    const Eigen::Index q = d.X.cols();
    const Eigen::MatrixXd S = penalty_matrix(d, lambdas);

    IrlsResult r;
    r.beta = Eigen::VectorXd::Zero(q);

    // strictly interior start: mu0 = (y + ybar)/2, eta0 = g(mu0)
    const double ybar = d.y.mean();
    Eigen::VectorXd mu(n), eta(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mu(i) = 0.5 * (d.y(i) + ybar);
        eta(i) = link_forward(d.link, mu(i));
    }

    double pen_old = std::numeric_limits<double>::infinity();
    double rel = std::numeric_limits<double>::infinity();
    bool have_beta = false;

    Eigen::VectorXd w(n), z(n);
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        r.iterations = iter;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dmu = std::max(link_dmu_deta(d.link, eta(i)), kDmuFloor);
            const double v = mu(i) * (1.0 - mu(i));
            w(i) = dmu * dmu / v;
            z(i) = eta(i) + (d.y(i) - mu(i)) / dmu;
        }

        const Eigen::MatrixXd XtW = d.X.transpose() * w.asDiagonal();
        const Eigen::MatrixXd H = XtW * d.X + S;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        if (ldlt.info() != Eigen::Success) {
            throw std::runtime_error("fit: penalized normal equations are singular");
        }
        Eigen::VectorXd prop = ldlt.solve(XtW * z);

        const Eigen::VectorXd ref = have_beta ? r.beta : Eigen::VectorXd::Zero(q).eval();
        bool accepted = false;
        double pen_new = 0.0;
        Eigen::VectorXd eta_try;
        for (int h = 0; h <= kMaxHalvings; ++h) {
            eta_try = d.X * prop;
            if (eta_try.allFinite() && eta_feasible(d, eta_try)) {
                pen_new = penalized_deviance(d, prop, lambdas);
                if (pen_new <= pen_old * (1.0 + 1e-12) + 1e-12) {
                    accepted = true;
                    break;
                }
            }
            prop = 0.5 * (prop + ref);
        }
        if (!accepted) {
            // cannot improve from here; fall back to the last accepted state
            r.converged = have_beta && rel < kRelTol;
            break;
        }

        r.beta = prop;
        have_beta = true;
        eta = eta_try;
        for (Eigen::Index i = 0; i < n; ++i) mu(i) = link_inverse(d.link, eta(i));

        rel = std::fabs(pen_new - pen_old) / (0.1 + std::fabs(pen_new));
        pen_old = pen_new;

        if (rel < kRelTol) {
            const double gmax = penalized_score(d, r.beta, lambdas).lpNorm<Eigen::Infinity>();
            if (gmax < kScoreTol || rel < 1e-13) {
                r.converged = true;
                break;
            }
        }
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        mu(i) = link_inverse(d.link, eta(i));
        const double dmu = std::max(link_dmu_deta(d.link, eta(i)), kDmuFloor);
        w(i) = dmu * dmu / (mu(i) * (1.0 - mu(i)));
    }
    r.eta = eta;
    r.mu = mu;
    r.w = w;
    r.deviance = bernoulli_deviance(d.y, mu);
    r.pen_deviance = pen_old;
    return r;
}

std::vector<double> lambda_grid() {
    std::vector<double> g;
    for (int e = -3; e <= 6; ++e) g.push_back(std::pow(10.0, e));
    return g;
}

struct EdfInfo {
    std::vector<double> per_term;
    double total = 0.0;
};

EdfInfo edf_from(const Design& d, const Eigen::MatrixXd& cov, const Eigen::VectorXd& w) {
    const Eigen::MatrixXd XtWX = d.X.transpose() * w.asDiagonal() * d.X;
    const Eigen::VectorXd diag = (cov * XtWX).diagonal();
    EdfInfo info;
    info.per_term = effective_df(d.smooth_ranges, diag);
    info.total = static_cast<double>(d.n_parametric);
    for (double e : info.per_term) info.total += e;
    return info;
}

FittedModel finish_fit(const Dataset& ds, const ModelSpec& spec, Design& d, const Eigen::VectorXd& lambdas) {
    IrlsResult r = run_irls(d, lambdas);

    const Eigen::Index q = d.X.cols();
    const Eigen::MatrixXd H = d.X.transpose() * r.w.asDiagonal() * d.X + penalty_matrix(d, lambdas);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(q, q));

    FittedModel m;
    m.spec = spec;
    m.alpha = r.beta(0);
    m.beta = r.beta.segment(1, d.n_parametric - 1);
    m.lambdas = lambdas;
    m.tau = spec.link.kind == LinkKind::Gev ? spec.link.tau : 0.0;
    m.deviance = r.deviance;
    m.converged = r.converged;
    m.iterations = r.iterations;
    m.cov = cov;
    m.n_train = ds.n();

    m.std_errors.resize(d.n_parametric);
    m.p_values.resize(d.n_parametric);
    for (int j = 0; j < d.n_parametric; ++j) {
        m.std_errors(j) = std::sqrt(std::max(0.0, cov(j, j)));
        m.p_values(j) = m.std_errors(j) > 0.0 ? wald_p(r.beta(j) / m.std_errors(j)) : 1.0;
    }

    const EdfInfo edf = edf_from(d, cov, r.w);
    m.edf_total = edf.total;
    const double denom = static_cast<double>(ds.n()) - edf.total;
    m.gcv = static_cast<double>(ds.n()) * r.deviance / (denom * denom);

    for (std::size_t t = 0; t < d.blocks.size(); ++t) {
        const auto [b, e] = d.smooth_ranges[t];
        FittedSmooth fs;
        fs.block = d.blocks[t];
        fs.block.B.resize(0, 0);  // training design not needed past this point
        fs.gamma = r.beta.segment(b, e - b);
        fs.edf = edf.per_term[t];
        fs.est_rank = fs.block.K - 1;
        const Eigen::MatrixXd Vg = cov.block(b, b, e - b, e - b);
        const Eigen::VectorXd t_stat = Eigen::LDLT<Eigen::MatrixXd>(Vg).solve(fs.gamma);
        fs.p_value = chi2_sf(fs.gamma.dot(t_stat), static_cast<double>(fs.est_rank));
        m.smooths.push_back(std::move(fs));
    }
    return m;
}

}  // namespace

Design assemble_design(const Dataset& ds, const ModelSpec& spec) {
    validate_spec(spec);
    const int n1 = ds.n_default();
    if (n1 == 0 || n1 == ds.n()) throw std::invalid_argument("fit: both response classes must be present");

    Design d;
    d.link = spec.link;
    d.y = ds.y.cast<double>();
    d.n_parametric = 1 + static_cast<int>(spec.linear_terms.size());

    int q = d.n_parametric;
    for (const auto& t : spec.smooth_terms) q += t.basis_dim - 1;

    d.X.resize(ds.n(), q);
    d.X.col(0).setOnes();

    auto used_col = [&](const std::string& name) {
        const int j = ds.col(name);
        for (int i = 0; i < ds.n(); ++i) {
            if (ds.is_missing(i, j)) {
                throw std::invalid_argument("fit: covariate '" + name + "' has missing values; complete the data first");
            }
        }
        return j;
    };

    int c = 1;
    for (const auto& t : spec.linear_terms) d.X.col(c++) = ds.x.col(used_col(t));
    for (const auto& t : spec.smooth_terms) {
        const int j = used_col(t.name);
        BasisBlock blk = build_basis(ds.x.col(j), t.basis_dim);
        blk.covariate = t.name;
        blk.covariate_index = j;
        d.X.block(0, c, ds.n(), t.basis_dim - 1) = blk.B;
        d.smooth_ranges.emplace_back(c, c + t.basis_dim - 1);
        c += t.basis_dim - 1;
        d.blocks.push_back(std::move(blk));
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
    if (qr.rank() < d.X.cols()) {
        throw std::runtime_error("fit: design matrix is rank deficient (aliased columns)");
    }
    return d;
}

double deviance_at(const Design& d, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = d.X * beta;
    Eigen::VectorXd mu(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) mu(i) = link_inverse(d.link, eta(i));
    return bernoulli_deviance(d.y, mu);
}

double penalized_deviance(const Design& d, const Eigen::VectorXd& beta, const Eigen::VectorXd& lambdas) {
    double pen = 0.0;
    for (std::size_t t = 0; t < d.blocks.size(); ++t) {
        const auto [b, e] = d.smooth_ranges[t];
        const Eigen::VectorXd g = beta.segment(b, e - b);
        pen += lambdas(static_cast<Eigen::Index>(t)) * g.dot(d.blocks[t].S * g);
    }
    return deviance_at(d, beta) + pen;
}

Eigen::VectorXd penalized_score(const Design& d, const Eigen::VectorXd& beta, const Eigen::VectorXd& lambdas) {
    const Eigen::VectorXd eta = d.X * beta;
    Eigen::VectorXd u(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = link_inverse(d.link, eta(i));
        const double dmu = link_dmu_deta(d.link, eta(i));
        u(i) = (d.y(i) - mu) * dmu / (mu * (1.0 - mu));
    }
    return d.X.transpose() * u - penalty_times(d, beta, lambdas);
}

FittedModel fit(const Dataset& ds, const ModelSpec& spec, const LambdaPolicy& lambdas) {
    Design d = assemble_design(ds, spec);

    Eigen::VectorXd lam = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.smooth_terms.size()));
    if (!spec.smooth_terms.empty()) {
        if (lambdas.mode == LambdaPolicy::Mode::Fixed) {
            if (lambdas.values.size() != spec.smooth_terms.size()) {
                throw std::invalid_argument("fit: fixed lambda count does not match smooth term count");
            }
            for (std::size_t t = 0; t < lambdas.values.size(); ++t) {
                if (!(lambdas.values[t] >= 0.0)) throw std::invalid_argument("fit: lambdas must be >= 0");
                lam(static_cast<Eigen::Index>(t)) = lambdas.values[t];
            }
        } else {
            const std::vector<double> sel = select_lambda(ds, spec);
            for (std::size_t t = 0; t < sel.size(); ++t) lam(static_cast<Eigen::Index>(t)) = sel[t];
        }
    }
    return finish_fit(ds, spec, d, lam);
}

std::vector<double> select_lambda(const Dataset& ds, const ModelSpec& spec) {
    if (spec.smooth_terms.empty()) throw std::invalid_argument("select_lambda: no smooth terms");
    Design d = assemble_design(ds, spec);
    const std::vector<double> grid = lambda_grid();
    const std::size_t T = spec.smooth_terms.size();

    Eigen::VectorXd lam = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(T));
    const double n = static_cast<double>(ds.n());

    for (int sweep = 0; sweep < 2; ++sweep) {
        for (std::size_t t = 0; t < T; ++t) {
            double best_gcv = std::numeric_limits<double>::infinity();
            double best_lambda = -1.0;
            for (double g : grid) {
                Eigen::VectorXd cand = lam;
                cand(static_cast<Eigen::Index>(t)) = g;
                IrlsResult r = run_irls(d, cand);
                if (!r.converged) continue;
                const Eigen::MatrixXd H = d.X.transpose() * r.w.asDiagonal() * d.X + penalty_matrix(d, cand);
                const Eigen::MatrixXd cov =
                    Eigen::LDLT<Eigen::MatrixXd>(H).solve(Eigen::MatrixXd::Identity(d.X.cols(), d.X.cols()));
                const double edf = edf_from(d, cov, r.w).total;
                const double gcv = n * r.deviance / ((n - edf) * (n - edf));
                if (gcv < best_gcv) {
                    best_gcv = gcv;
                    best_lambda = g;
                }
            }
            if (best_lambda < 0.0) throw std::runtime_error("select_lambda: no grid fit converged");
            lam(static_cast<Eigen::Index>(t)) = best_lambda;
        }
    }
    std::vector<double> out(T);
    for (std::size_t t = 0; t < T; ++t) out[t] = lam(static_cast<Eigen::Index>(t));
    return out;
}

std::vector<double> default_tau_grid() {
    std::vector<double> g;
    for (int i = 20; i >= 1; --i) g.push_back(-0.05 * i);
    return g;
}

double select_tau(const Dataset& ds, const ModelSpec& spec, const std::vector<double>& grid,
                  const LambdaPolicy& lambdas) {
    if (grid.empty()) throw std::invalid_argument("select_tau: empty grid");
    if (grid.size() == 1) return grid.front();

    double best_tau = 0.0;
    double best_dev = std::numeric_limits<double>::infinity();
    bool any = false;
    for (double tau : grid) {
        ModelSpec s = spec;
        s.link = LinkSpec::gev(tau, spec.link.epsilon);
        FittedModel m;
        try {
            m = fit(ds, s, lambdas);
        } catch (const std::runtime_error&) {
            continue;  // numerical failure at this grid point
        }
        if (!m.converged) continue;
        const bool better =
            m.deviance < best_dev || (m.deviance == best_dev && std::fabs(tau) < std::fabs(best_tau));
        if (!any || better) {
            best_dev = m.deviance;
            best_tau = tau;
            any = true;
        }
    }
    if (!any) throw std::runtime_error("select_tau: no grid point converged");
    return best_tau;
}

Eigen::VectorXd predict(const FittedModel& m, const Dataset& ds) {
    auto used_col = [&](const std::string& name) {
        const int j = ds.col(name);
        for (int i = 0; i < ds.n(); ++i) {
            if (ds.is_missing(i, j)) {
                throw std::invalid_argument("predict: covariate '" + name + "' has missing values");
            }
        }
        return j;
    };
    std::vector<int> lin_cols, sm_cols;
    for (const auto& t : m.spec.linear_terms) lin_cols.push_back(used_col(t));
    for (const auto& s : m.smooths) sm_cols.push_back(used_col(s.block.covariate));

    Eigen::VectorXd pd(ds.n());
    for (int i = 0; i < ds.n(); ++i) {
        double eta = m.alpha;
        for (std::size_t k = 0; k < lin_cols.size(); ++k) {
            eta += m.beta(static_cast<Eigen::Index>(k)) * ds.x(i, lin_cols[k]);
        }
        for (std::size_t k = 0; k < sm_cols.size(); ++k) {
            eta += bspline_row(m.smooths[k].block, ds.x(i, sm_cols[k])).dot(m.smooths[k].gamma);
        }
        pd(i) = link_inverse(m.spec.link, eta);
    }
    return pd;
}

ModelSummary summarize(const FittedModel& m) {
    if (!m.converged) throw std::runtime_error("summarize: model did not converge");
    ModelSummary s;
    s.deviance = m.deviance;
    s.tau = m.tau;
    s.link = link_name(m.spec.link);
    s.edf_total = m.edf_total;
    s.n = m.n_train;

    s.parametric.push_back({"(Intercept)", m.alpha, m.std_errors(0), m.p_values(0)});
    for (std::size_t j = 0; j < m.spec.linear_terms.size(); ++j) {
        const auto idx = static_cast<Eigen::Index>(j);
        s.parametric.push_back(
            {m.spec.linear_terms[j], m.beta(idx), m.std_errors(idx + 1), m.p_values(idx + 1)});
    }
    for (const auto& fs : m.smooths) {
        SmoothRow row;
        row.name = "s(" + fs.block.covariate + ")";
        row.edf = fs.edf;
        row.est_rank = fs.est_rank;
        row.p_value = fs.p_value;
        row.effectively_linear = fs.edf < 1.05;
        s.smooths.push_back(row);
    }
    return s;
}

std::string summary_text(const ModelSummary& s) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(6);
    out << "Link: " << s.link;
    if (s.link == "gev") out << " (tau = " << s.tau << ")";
    out << "   n = " << s.n << "   deviance = " << s.deviance << "   total Edf = " << s.edf_total << "\n\n";

    out << "Parametric terms:\n";
    out << "  " << std::left;
    out.width(24);
    out << "term" << std::right << "    estimate   std.error     p-value\n";
    auto coef_line = [&](const std::string& name, double est, double se, double p) {
        out << "  " << std::left;
        out.width(24);
        out << name << std::right;
        out.width(12);
        out << est;
        out.width(12);
        out << se;
        out.width(12);
        out << p << "\n";
    };
    for (const auto& r : s.parametric) coef_line(r.name, r.estimate, r.std_error, r.p_value);
    for (const auto& r : s.smooths) {
        if (r.effectively_linear) {
            out << "  " << std::left;
            out.width(24);
            out << r.name << std::right << "  effectively linear (Edf = ";
            out.precision(3);
            out << r.edf << "), reported here\n";
            out.precision(6);
        }
    }

    bool any_smooth = false;
    for (const auto& r : s.smooths) any_smooth |= !r.effectively_linear;
    if (any_smooth) {
        out << "\nSmooth terms:\n";
        out << "  " << std::left;
        out.width(24);
        out << "term" << std::right << "         Edf   est.rank     p-value\n";
        for (const auto& r : s.smooths) {
            if (r.effectively_linear) continue;
            out << "  " << std::left;
            out.width(24);
            out << r.name << std::right;
            out.precision(3);
            out.width(12);
            out << r.edf;
            out.width(11);
            out << r.est_rank;
            out.precision(6);
            out.width(12);
            out << r.p_value << "\n";
        }
    }
    return out.str();
}

SmoothCurve smooth_curve(const FittedModel& m, const std::string& term, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("smooth_curve: grid_size >= 2 required");
    int idx = -1;
    int offset = 1 + static_cast<int>(m.spec.linear_terms.size());
    int begin = offset;
    for (std::size_t t = 0; t < m.smooths.size(); ++t) {
        const int width = m.smooths[t].block.K - 1;
        if (m.smooths[t].block.covariate == term) {
            idx = static_cast<int>(t);
            break;
        }
        begin += width;
    }
    if (idx < 0) throw std::invalid_argument("smooth_curve: unknown smooth term '" + term + "'");

    const FittedSmooth& fs = m.smooths[static_cast<std::size_t>(idx)];
    const int width = fs.block.K - 1;
    const Eigen::MatrixXd Vg = m.cov.block(begin, begin, width, width);

    SmoothCurve c;
    c.x.resize(grid_size);
    c.fit.resize(grid_size);
    c.lo95.resize(grid_size);
    c.hi95.resize(grid_size);
    const double lo = fs.block.x_min(), hi = fs.block.x_max();
    for (int g = 0; g < grid_size; ++g) {
        const double xg = lo + (hi - lo) * g / (grid_size - 1);
        const Eigen::VectorXd row = bspline_row(fs.block, xg);
        const double f = row.dot(fs.gamma);
        const double se = std::sqrt(std::max(0.0, row.dot(Vg * row)));
        c.x(g) = xg;
        c.fit(g) = f;
        c.lo95(g) = f - 1.96 * se;
        c.hi95(g) = f + 1.96 * se;
    }
    return c;
}

}  // namespace gevreg
