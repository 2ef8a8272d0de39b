#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gevreg/links.hpp"
#include "gevreg/stats.hpp"

using namespace gevreg;

namespace {

// central finite difference of the inverse link
double fd_dmu(const LinkSpec& link, double eta, double h = 1e-6) {
    return (link_inverse(link, eta + h) - link_inverse(link, eta - h)) / (2.0 * h);
}

// eta grid strictly inside the support, shrunk a little from the boundary
std::vector<double> interior_grid(const LinkSpec& link, int points) {
    double lo = -3.0, hi = 3.0;
    if (link.kind == LinkKind::Gev) {
        const double bound = -1.0 / link.tau;
        if (link.tau < 0.0) {
            hi = std::min(hi, bound - 0.05);
        } else {
            lo = std::max(lo, bound + 0.05);
        }
    }
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(lo + (hi - lo) * i / (points - 1));
    return g;
}

}  // namespace

TEST_CASE("logit forward/inverse basics") {
    const LinkSpec link = LinkSpec::logit();
    CHECK(link_forward(link, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(link_inverse(link, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    // eta computed by hand for one value
    CHECK(link_inverse(link, 1.3) == doctest::Approx(1.0 / (1.0 + std::exp(-1.3))).epsilon(1e-15));
    CHECK(link_dmu_deta(link, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("gev link pins") {
    // eta = 0 maps to exp(-1) for every tau
    for (double tau : {-0.9, -0.41, -0.25, 0.5}) {
        const LinkSpec link = LinkSpec::gev(tau);
        CHECK(link_inverse(link, 0.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
        CHECK(link_forward(link, std::exp(-1.0)) == doctest::Approx(0.0).epsilon(1e-12));
    }
    // hand inversion: tau=-0.5, mu=exp(-0.25) -> eta = ((0.25)^0.5 - 1)/(-0.5) = 1
    const LinkSpec g5 = LinkSpec::gev(-0.5);
    CHECK(link_forward(g5, std::exp(-0.25)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(link_inverse(g5, 1.0) == doctest::Approx(0.7788007830714049).epsilon(1e-14));
    // beyond the upper endpoint (tau<0) the distribution has saturated
    CHECK(link_inverse(g5, 3.0) == 1.0 - g5.epsilon);
    CHECK(link_inverse(g5, 2.0) == 1.0 - g5.epsilon);
    // tau>0: saturates to eps on the left
    const LinkSpec gp = LinkSpec::gev(0.5);
    CHECK(link_inverse(gp, -3.0) == gp.epsilon);
}

TEST_CASE("loglog and gev derivatives at 0 (finite-difference oracle)") {
    CHECK(link_dmu_deta(LinkSpec::loglog(), 0.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(link_dmu_deta(LinkSpec::gev(-0.5), 0.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(link_dmu_deta(LinkSpec::loglog(), 0.0) == doctest::Approx(fd_dmu(LinkSpec::loglog(), 0.0)).epsilon(1e-8));
}

TEST_CASE("derivative matches finite differences on interior grids") {
    for (const LinkSpec& link :
         {LinkSpec::logit(), LinkSpec::loglog(), LinkSpec::gev(-0.41), LinkSpec::gev(-0.9), LinkSpec::gev(0.7)}) {
        for (double eta : interior_grid(link, 100)) {
            const double d = link_dmu_deta(link, eta);
            CHECK(d > 0.0);
            const double fd = fd_dmu(link, eta);
            CHECK(std::fabs(d - fd) / std::fabs(fd) < 1e-6);
        }
    }
}

TEST_CASE("round trip forward(inverse(eta)) = eta") {
    for (const LinkSpec& link :
         {LinkSpec::logit(), LinkSpec::loglog(), LinkSpec::gev(-0.41), LinkSpec::gev(-0.9), LinkSpec::gev(0.7)}) {
        for (double eta : interior_grid(link, 1000)) {
            CHECK(std::fabs(link_forward(link, link_inverse(link, eta)) - eta) < 1e-8);
        }
    }
}

TEST_CASE("monotonicity of the inverse link") {
    for (const LinkSpec& link : {LinkSpec::logit(), LinkSpec::loglog(), LinkSpec::gev(-0.41), LinkSpec::gev(0.7)}) {
        double prev = -1.0;
        for (int i = 0; i <= 600; ++i) {
            const double eta = -6.0 + 12.0 * i / 600.0;
            const double mu = link_inverse(link, eta);
            CHECK(mu >= prev);
            prev = mu;
        }
    }
}

TEST_CASE("Gumbel limit: GEV(1e-6) tracks LogLog within 1e-4") {
    // constructed directly: the factory would redirect |tau| < 1e-3 to LogLog
    const LinkSpec tiny{LinkKind::Gev, 1e-6, 1e-10};
    const LinkSpec tiny_neg{LinkKind::Gev, -1e-6, 1e-10};
    const LinkSpec ll = LinkSpec::loglog();
    for (int i = 0; i <= 300; ++i) {
        const double eta = -3.0 + 6.0 * i / 300.0;
        CHECK(std::fabs(link_inverse(tiny, eta) - link_inverse(ll, eta)) < 1e-4);
        CHECK(std::fabs(link_inverse(tiny_neg, eta) - link_inverse(ll, eta)) < 1e-4);
    }
}

TEST_CASE("factory redirects small tau to LogLog") {
    CHECK(LinkSpec::gev(1e-4).kind == LinkKind::LogLog);
    CHECK(LinkSpec::gev(-0.0005).kind == LinkKind::LogLog);
    CHECK(LinkSpec::gev(-0.05).kind == LinkKind::Gev);
}

TEST_CASE("asymmetry witness: GEV(-0.41) is not symmetric around 0.5") {
    const LinkSpec g = LinkSpec::gev(-0.41);
    const double s = link_inverse(g, -1.0) + link_inverse(g, 1.0);
    CHECK(std::fabs(s - 1.0) > 1e-3);
    // while logit is
    const LinkSpec l = LinkSpec::logit();
    CHECK(link_inverse(l, -1.0) + link_inverse(l, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("derivative errors at/outside the GEV support boundary") {
    const LinkSpec g = LinkSpec::gev(-0.5);  // support eta < 2
    CHECK_THROWS_AS(link_dmu_deta(g, 2.0), std::domain_error);
    CHECK_THROWS_AS(link_dmu_deta(g, 5.0), std::domain_error);
    CHECK_NOTHROW(link_dmu_deta(g, 1.9));
    CHECK(eta_in_support(g, 1.9));
    CHECK_FALSE(eta_in_support(g, 2.0));
}

TEST_CASE("epsilon validation and clamping") {
    CHECK_THROWS_AS(LinkSpec::logit(0.0), std::invalid_argument);
    CHECK_THROWS_AS(LinkSpec::logit(1e-3), std::invalid_argument);
    const LinkSpec l = LinkSpec::logit();
    CHECK(link_inverse(l, 1e9) == 1.0 - l.epsilon);
    CHECK(link_inverse(l, -1e9) == l.epsilon);
    // out-of-range mu clamps before the forward map
    CHECK(std::isfinite(link_forward(l, 0.0)));
    CHECK(std::isfinite(link_forward(l, 1.0)));
}

TEST_CASE("stats utilities against frozen references") {
    CHECK(chi2_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi2_sf(16.918977604620448, 9.0) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi2_sf(2.0, 4.0) == doctest::Approx(0.7357588823428847).epsilon(1e-12));
    CHECK(chi2_sf(25.0, 9.0) == doctest::Approx(0.002971180485917624).epsilon(1e-10));
    CHECK(normal_sf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_sf(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
    CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
}
