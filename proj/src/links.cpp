#include "gevreg/links.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gevreg {

namespace {

void check_eps(double eps) {
    if (!(eps > 0.0) || !(eps < 1e-4)) {
        throw std::invalid_argument("LinkSpec: epsilon must lie in (0, 1e-4)");
    }
}

double clamp_prob(double mu, double eps) { return std::clamp(mu, eps, 1.0 - eps); }

}  // namespace

LinkSpec LinkSpec::logit(double eps) {
    check_eps(eps);
    return LinkSpec{LinkKind::Logit, 0.0, eps};
}

LinkSpec LinkSpec::loglog(double eps) {
    check_eps(eps);
    return LinkSpec{LinkKind::LogLog, 0.0, eps};
}

LinkSpec LinkSpec::gev(double tau, double eps) {
    check_eps(eps);
    if (!std::isfinite(tau)) throw std::invalid_argument("LinkSpec: tau must be finite");
    if (std::fabs(tau) < 1e-3) return loglog(eps);
    return LinkSpec{LinkKind::Gev, tau, eps};
}

std::string link_name(const LinkSpec& link) {
    switch (link.kind) {
        case LinkKind::Logit: return "logit";
        case LinkKind::LogLog: return "loglog";
        case LinkKind::Gev: return "gev";
    }
    return "unknown";
}

double link_forward(const LinkSpec& link, double mu) {
    mu = clamp_prob(mu, link.epsilon);
    switch (link.kind) {
        case LinkKind::Logit:
            return std::log(mu / (1.0 - mu));
        case LinkKind::LogLog:
            return -std::log(-std::log(mu));
        case LinkKind::Gev: {
            // ((-ln mu)^(-tau) - 1)/tau via expm1 for stability at small |tau|
            const double w = std::log(-std::log(mu));
            return std::expm1(-link.tau * w) / link.tau;
        }
    }
    throw std::logic_error("link_forward: unknown link kind");
}

double link_inverse(const LinkSpec& link, double eta) {
    const double eps = link.epsilon;
    switch (link.kind) {
        case LinkKind::Logit: {
            const double mu = eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                                         : std::exp(eta) / (1.0 + std::exp(eta));
            return clamp_prob(mu, eps);
        }
        case LinkKind::LogLog:
            return clamp_prob(std::exp(-std::exp(-eta)), eps);
        case LinkKind::Gev: {
            const double u = 1.0 + link.tau * eta;
            if (u <= 0.0) return link.tau < 0.0 ? 1.0 - eps : eps;
            // mu = exp(-(1+tau*eta)^(-1/tau)); log1p keeps the tiny-tau limit exact
            const double w = std::log1p(link.tau * eta) / link.tau;
            return clamp_prob(std::exp(-std::exp(-w)), eps);
        }
    }
    throw std::logic_error("link_inverse: unknown link kind");
}

double link_dmu_deta(const LinkSpec& link, double eta) {
    switch (link.kind) {
        case LinkKind::Logit: {
            const double e = std::exp(-std::fabs(eta));
            const double d = 1.0 + e;
            return e / (d * d);
        }
        case LinkKind::LogLog:
            return std::exp(-eta - std::exp(-eta));
        case LinkKind::Gev: {
            const double u = 1.0 + link.tau * eta;
            if (u <= 0.0) {
                throw std::domain_error("link_dmu_deta: eta at or outside the GEV support boundary");
            }
            // mu * (1+tau*eta)^(-1/tau - 1), assembled in log space
            const double w = std::log1p(link.tau * eta) / link.tau;
            return std::exp(-std::exp(-w) - w * (1.0 + link.tau));
        }
    }
    throw std::logic_error("link_dmu_deta: unknown link kind");
}

bool eta_in_support(const LinkSpec& link, double eta) {
    if (!std::isfinite(eta)) return false;
    if (link.kind != LinkKind::Gev) return true;
    return 1.0 + link.tau * eta > 0.0;
}

}  // namespace gevreg
