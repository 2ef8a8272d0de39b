#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gevreg {

inline double normal_sf(double z) { return 0.5 * std::erfc(z / 1.4142135623730950488016887242097); }

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730950488016887242097); }

// two-sided p-value of a Wald z statistic
inline double wald_p(double z) { return std::erfc(std::fabs(z) / 1.4142135623730950488016887242097); }

namespace detail {

// lower regularized incomplete gamma, series expansion (x < a+1)
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// upper regularized incomplete gamma, continued fraction (x >= a+1)
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// upper regularized incomplete gamma Q(a, x)
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: a > 0 and x >= 0 required");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

// survival function of a chi-square with k degrees of freedom
inline double chi2_sf(double x, double k) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * k, 0.5 * x);
}

inline double round_half_up(double x) { return std::floor(x + 0.5); }

}  // namespace gevreg
