#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gevreg/dataset.hpp"
#include "gevreg/links.hpp"
#include "gevreg/rng.hpp"
#include "gevreg/simulate.hpp"

using namespace gevreg;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/gevreg_test_") + name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("load_csv parses values, empty cells and NA as missing") {
    const auto path = write_temp("basic.csv", "a,b,y\n1.5,2.0,0\n,3.5,1\n2.5,NA,0\n");
    const Dataset ds = load_csv(path, "y");
    CHECK(ds.n() == 3);
    CHECK(ds.p() == 2);
    CHECK(ds.feature_names[0] == "a");
    CHECK(ds.x(0, 0) == 1.5);
    CHECK(ds.is_missing(1, 0));
    CHECK(ds.is_missing(2, 1));
    int miss = 0;
    for (int i = 0; i < ds.n(); ++i) {
        for (int j = 0; j < ds.p(); ++j) miss += ds.is_missing(i, j) ? 1 : 0;
    }
    CHECK(miss == 2);
    CHECK(ds.y(1) == 1);
    std::remove(path.c_str());
}

TEST_CASE("single empty cell in a 3-row file flags exactly one missing") {
    const auto path = write_temp("onecell.csv", "a,y\n1,0\n,1\n3,0\n");
    const Dataset ds = load_csv(path, "y");
    int miss = 0;
    for (int i = 0; i < ds.n(); ++i) miss += ds.is_missing(i, 0) ? 1 : 0;
    CHECK(miss == 1);
    std::remove(path.c_str());
}

TEST_CASE("all-zero response loads; the loader does not reject degenerate classes") {
    const auto path = write_temp("allzero.csv", "a,y\n1,0\n2,0\n3,0\n");
    const Dataset ds = load_csv(path, "y");
    CHECK(ds.n_default() == 0);
    std::remove(path.c_str());
}

TEST_CASE("malformed cell reports row and column") {
    const auto path = write_temp("bad.csv", "a,b,y\n1,2,0\n3,abc,1\n");
    try {
        load_csv(path, "y");
        FAIL("expected error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("'b'") != std::string::npos);
        CHECK(msg.find("abc") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("loader rejects absent response and non-binary response") {
    const auto p1 = write_temp("noresp.csv", "a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(p1, "y"), std::runtime_error);
    const auto p2 = write_temp("badresp.csv", "a,y\n1,2\n");
    CHECK_THROWS_AS(load_csv(p2, "y"), std::runtime_error);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("save_csv then load_csv preserves values and missingness") {
    const auto path = write_temp("rt.csv", "a,b,y\n0.1,2,0\n,0.30000000000000004,1\n-5e-3,NA,1\n");
    const Dataset ds = load_csv(path, "y");
    const std::string out = "/tmp/gevreg_test_rt_out.csv";
    save_csv(ds, out, "y");
    const Dataset ds2 = load_csv(out, "y");
    REQUIRE(ds2.n() == ds.n());
    for (int i = 0; i < ds.n(); ++i) {
        CHECK(ds2.y(i) == ds.y(i));
        for (int j = 0; j < ds.p(); ++j) {
            if (ds.is_missing(i, j)) {
                CHECK(ds2.is_missing(i, j));
            } else {
                CHECK(ds2.x(i, j) == ds.x(i, j));
            }
        }
    }
    std::remove(path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("stratified split: 100 rows, 10 defaults, fraction 0.7") {
    Eigen::MatrixXd x(100, 1);
    Eigen::VectorXi y(100);
    for (int i = 0; i < 100; ++i) {
        x(i, 0) = i;
        y(i) = i < 10 ? 1 : 0;
    }
    const Dataset ds = Dataset::make({"a"}, x, y);
    const auto [train, test] = stratified_split(ds, 0.7, 42);
    CHECK(train.n() == 70);
    CHECK(test.n() == 30);
    CHECK(train.n_default() == 7);
    CHECK(test.n_default() == 3);
}

TEST_CASE("stratified split determinism and completeness") {
    Eigen::MatrixXd x(57, 2);
    Eigen::VectorXi y(57);
    Rng rng(7);
    for (int i = 0; i < 57; ++i) {
        x(i, 0) = rng.uniform01();
        x(i, 1) = rng.normal();
        y(i) = i % 9 == 0 ? 1 : 0;
    }
    const Dataset ds = Dataset::make({"a", "b"}, x, y);
    const auto [tr1, te1] = stratified_split(ds, 0.7, 123);
    const auto [tr2, te2] = stratified_split(ds, 0.7, 123);
    CHECK(tr1.x == tr2.x);
    CHECK(te1.x == te2.x);
    CHECK(tr1.y == tr2.y);

    // union of parts is a permutation of the input rows
    std::vector<double> all;
    for (int i = 0; i < tr1.n(); ++i) all.push_back(tr1.x(i, 0));
    for (int i = 0; i < te1.n(); ++i) all.push_back(te1.x(i, 0));
    std::vector<double> orig;
    for (int i = 0; i < ds.n(); ++i) orig.push_back(ds.x(i, 0));
    std::sort(all.begin(), all.end());
    std::sort(orig.begin(), orig.end());
    CHECK(all == orig);

    // a different seed moves rows around
    const auto [tr3, te3] = stratified_split(ds, 0.7, 124);
    CHECK(tr3.x != tr1.x);
}

TEST_CASE("stratified split preserves 70/30 per class within one row") {
    Eigen::MatrixXd x(10000, 1);
    Eigen::VectorXi y(10000);
    for (int i = 0; i < 10000; ++i) {
        x(i, 0) = i;
        y(i) = i < 300 ? 1 : 0;
    }
    const Dataset ds = Dataset::make({"a"}, x, y);
    const auto [train, test] = stratified_split(ds, 0.7, 9);
    CHECK(std::abs(train.n_default() - 210) <= 1);
    CHECK(std::abs((train.n() - train.n_default()) - 6790) <= 1);
}

TEST_CASE("stratified split rejects tiny classes and bad fractions") {
    Eigen::MatrixXd x(4, 1);
    x << 1, 2, 3, 4;
    Eigen::VectorXi y(4);
    y << 1, 0, 0, 0;
    const Dataset ds = Dataset::make({"a"}, x, y);
    CHECK_THROWS_AS(stratified_split(ds, 0.7, 1), std::invalid_argument);
    Eigen::VectorXi y2(4);
    y2 << 1, 1, 0, 0;
    const Dataset ds2 = Dataset::make({"a"}, x, y2);
    CHECK_THROWS_AS(stratified_split(ds2, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(stratified_split(ds2, 1.0, 1), std::invalid_argument);
    CHECK_NOTHROW(stratified_split(ds2, 0.5, 1));
}

TEST_CASE("simulate: logit intercept-only default rate near 0.5") {
    SimSpec spec;
    spec.n = 10000;
    spec.intercept = 0.0;
    spec.linear.push_back({"x1", 0.0, CovariateDist::uniform(0, 1)});
    spec.link = LinkSpec::logit();
    spec.seed = 11;
    const Dataset ds = simulate(spec);
    const double rate = ds.y.cast<double>().mean();
    const double se = std::sqrt(0.25 / spec.n);
    CHECK(std::fabs(rate - 0.5) < 3.0 * se);
}

TEST_CASE("simulate: GEV tau=-0.41 intercept 0 default rate near exp(-1)") {
    SimSpec spec;
    spec.n = 20000;
    spec.intercept = 0.0;
    spec.linear.push_back({"x1", 0.0, CovariateDist::normal(0, 1)});
    spec.link = LinkSpec::gev(-0.41);
    spec.seed = 12;
    const Dataset ds = simulate(spec);
    const double target = 0.36787944117144233;
    const double se = std::sqrt(target * (1 - target) / spec.n);
    CHECK(std::fabs(ds.y.cast<double>().mean() - target) < 3.0 * se);
}

TEST_CASE("simulate calibration at fixed eta, n = 1e5, within 4 SE") {
    for (double eta0 : {-1.2, 0.4}) {
        SimSpec spec;
        spec.n = 100000;
        spec.intercept = eta0;
        spec.linear.push_back({"x1", 0.0, CovariateDist::uniform(0, 1)});
        spec.link = LinkSpec::gev(-0.6);
        spec.seed = 77;
        const Dataset ds = simulate(spec);
        const double target = link_inverse(spec.link, eta0);
        const double se = std::sqrt(target * (1 - target) / spec.n);
        CHECK(std::fabs(ds.y.cast<double>().mean() - target) < 4.0 * se);
    }
}

TEST_CASE("simulate: 20% missing rate lands within 2 points") {
    SimSpec spec;
    spec.n = 5000;
    spec.intercept = -1.0;
    spec.linear.push_back({"x1", 0.5, CovariateDist::uniform(0, 1)});
    spec.linear.push_back({"x2", 0.3, CovariateDist::normal(0, 1)});
    spec.link = LinkSpec::logit();
    spec.missing = {{"x2"}, "x1", 0.2, 0.5};
    spec.seed = 5;
    const Dataset ds = simulate(spec);
    int miss = 0;
    for (int i = 0; i < ds.n(); ++i) miss += ds.is_missing(i, 1) ? 1 : 0;
    CHECK(std::fabs(miss / 5000.0 - 0.2) < 0.02);
    for (int i = 0; i < ds.n(); ++i) CHECK_FALSE(ds.is_missing(i, 0));
}

TEST_CASE("simulate with missing_rate 0 produces no missing cells") {
    SimSpec spec;
    spec.n = 500;
    spec.intercept = 0.0;
    spec.smooth.push_back({"x1", "sin2pi", 1.0, CovariateDist::uniform(0, 1)});
    spec.link = LinkSpec::logit();
    spec.seed = 3;
    const Dataset ds = simulate(spec);
    CHECK(ds.complete());
}

TEST_CASE("dataset invariants enforced") {
    Eigen::MatrixXd x(2, 1);
    x << 1, 2;
    Eigen::VectorXi bad(2);
    bad << 0, 2;
    CHECK_THROWS_AS(Dataset::make({"a"}, x, bad), std::invalid_argument);
    Eigen::VectorXi ok(2);
    ok << 0, 1;
    CHECK_THROWS_AS(Dataset::make({"a", "b"}, x, ok), std::invalid_argument);
    Eigen::MatrixXd inf_x(2, 1);
    inf_x << 1, std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Dataset::make({"a"}, inf_x, ok), std::invalid_argument);
    const Dataset ds = Dataset::make({"a"}, x, ok);
    CHECK_THROWS_AS(ds.col("zzz"), std::invalid_argument);
}
