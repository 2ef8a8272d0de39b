#pragma once

#include <string>

namespace gevreg {

enum class LinkKind { Logit, LogLog, Gev };

// Link between the linear predictor eta and the event probability mu.
//
//   Logit   eta = ln(mu/(1-mu))
//   LogLog  eta = -ln(-ln mu)            (Gumbel; GEV tail parameter -> 0)
//   Gev     eta = ((-ln mu)^(-tau) - 1)/tau
//
// Probabilities are clamped to [epsilon, 1-epsilon] so that inverse maps and
// likelihood evaluations stay finite near saturation.
struct LinkSpec {
    LinkKind kind = LinkKind::Logit;
    double tau = 0.0;        // GEV tail parameter; meaningful only for kind == Gev
    double epsilon = 1e-10;  // probability clamp bound, in (0, 1e-4)

    static LinkSpec logit(double eps = 1e-10);
    static LinkSpec loglog(double eps = 1e-10);
    // |tau| < 1e-3 is redirected to LogLog: the ((.)^(-tau)-1)/tau form cancels
    // catastrophically near tau = 0 and the Gumbel link is its exact limit.
    static LinkSpec gev(double tau, double eps = 1e-10);
};

std::string link_name(const LinkSpec& link);

// eta as a function of mu; mu is clamped into [eps, 1-eps] first.
double link_forward(const LinkSpec& link, double mu);

// mu as a function of eta, total on all reals. Outside the GEV support the
// distribution has saturated: returns 1-eps (tau < 0) or eps (tau > 0).
// Result is always inside [eps, 1-eps].
double link_inverse(const LinkSpec& link, double eta);

// d mu / d eta. Throws std::domain_error at or outside the GEV support
// boundary (the fitter step-halves on that signal).
double link_dmu_deta(const LinkSpec& link, double eta);

// strict interior of the link's support
bool eta_in_support(const LinkSpec& link, double eta);

}  // namespace gevreg
