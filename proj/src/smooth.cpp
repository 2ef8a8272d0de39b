#include "gevreg/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace gevreg {

std::vector<double> BasisBlock::knots() const {
    std::vector<double> t(static_cast<std::size_t>(K) + 4);
    for (int j = 0; j < K + 4; ++j) t[static_cast<std::size_t>(j)] = a + (j - 3) * h;
    return t;
}

Eigen::VectorXd bspline_row_raw(const BasisBlock& blk, double x) {
    const double lo = blk.x_min(), hi = blk.x_max();
    x = std::clamp(x, lo, hi);

    double u = (x - blk.a) / blk.h;
    int cell = static_cast<int>(std::floor(u));
    cell = std::clamp(cell, 0, blk.K - 4);
    const double t = u - cell;

    // cardinal cubic B-spline weights on a uniform lattice
    const double omt = 1.0 - t;
    const double w0 = omt * omt * omt / 6.0;
    const double w1 = (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0;
    const double w2 = (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0;
    const double w3 = t * t * t / 6.0;

    Eigen::VectorXd row = Eigen::VectorXd::Zero(blk.K);
    row(cell) = w0;
    row(cell + 1) = w1;
    row(cell + 2) = w2;
    row(cell + 3) = w3;
    return row;
}

Eigen::VectorXd bspline_row(const BasisBlock& blk, double x) {
    return blk.Z.transpose() * bspline_row_raw(blk, x);
}

BasisBlock build_basis(const Eigen::VectorXd& x, int K) {
    if (K < 4) throw std::invalid_argument("build_basis: K >= 4 required");

    std::set<double> distinct;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::isnan(x(i))) continue;
        distinct.insert(x(i));
        lo = std::min(lo, x(i));
        hi = std::max(hi, x(i));
    }
    if (static_cast<int>(distinct.size()) < K) {
        throw std::invalid_argument("build_basis: need at least K distinct non-missing values");
    }

    BasisBlock blk;
    blk.K = K;
    blk.a = lo;
    blk.h = (hi - lo) / (K - 3);

    // second-difference penalty on the raw coefficients
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(K - 2, K);
    for (int r = 0; r < K - 2; ++r) {
        D(r, r) = 1.0;
        D(r, r + 1) = -2.0;
        D(r, r + 2) = 1.0;
    }
    const Eigen::MatrixXd S_raw = D.transpose() * D;

    // raw design and the centering constraint c = column sums
    Eigen::MatrixXd B_raw(x.size(), K);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::isnan(x(i))) {
            B_raw.row(i).setConstant(std::numeric_limits<double>::quiet_NaN());
        } else {
            B_raw.row(i) = bspline_row_raw(blk, x(i)).transpose();
        }
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(K);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isnan(x(i))) c += B_raw.row(i).transpose();
    }

    // null-space basis of c^T via the full Householder Q; drop the first column
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
    const Eigen::MatrixXd Q = qr.householderQ();
    blk.Z = Q.rightCols(K - 1);

    blk.B = B_raw * blk.Z;
    Eigen::MatrixXd S = blk.Z.transpose() * S_raw * blk.Z;
    blk.S = 0.5 * (S + S.transpose());
    return blk;
}

std::vector<double> effective_df(const std::vector<std::pair<int, int>>& term_ranges,
                                 const Eigen::VectorXd& influence_diag) {
    std::vector<double> out;
    out.reserve(term_ranges.size());
    for (const auto& [b, e] : term_ranges) {
        if (b < 0 || e > influence_diag.size() || b >= e) {
            throw std::invalid_argument("effective_df: term range out of bounds");
        }
        out.push_back(influence_diag.segment(b, e - b).sum());
    }
    return out;
}

}  // namespace gevreg
