#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace gevreg {

// One penalized spline term: cubic B-splines on a uniform knot lattice with a
// second-order difference penalty, reparameterized to absorb the sum-to-zero
// identifiability constraint.
//
// The lattice has K + 4 knots t_j = a + (j - 3) h, j = 0..K+3, so the data
// range is exactly [t_3, t_K] = [a, b]. On a uniform lattice the penalty null
// space (gamma linear in basis index) maps to functions exactly linear in x,
// which is what makes Edf = 1 mean "linear effect".
struct BasisBlock {
    std::string covariate;
    int covariate_index = -1;
    int K = 0;        // raw basis dimension (>= 4)
    double a = 0.0;   // left boundary knot (training min)
    double h = 0.0;   // knot spacing, (max - min) / (K - 3)
    Eigen::MatrixXd Z;  // K x (K-1), orthonormal null-space basis of the centering constraint
    Eigen::MatrixXd S;  // (K-1) x (K-1) centered penalty, PSD with 1-dim null space
    Eigen::MatrixXd B;  // n x (K-1) centered design columns over the construction data
    double lambda = 0.0;

    double x_min() const { return a; }
    double x_max() const { return a + (K - 3) * h; }
    std::vector<double> knots() const;
};

// Raw basis row (length K); x is clamped into [x_min, x_max] first.
Eigen::VectorXd bspline_row_raw(const BasisBlock& blk, double x);

// Centered basis row (length K-1): raw row times Z.
Eigen::VectorXd bspline_row(const BasisBlock& blk, double x);

// Build the block from the covariate values (NaN = missing, excluded from the
// range; rows with NaN get NaN design rows). Requires K >= 4 and at least K
// distinct non-missing values.
BasisBlock build_basis(const Eigen::VectorXd& x, int K);

// Per-term effective degrees of freedom: sums of the influence-matrix
// diagonal over each term's column range [begin, end).
std::vector<double> effective_df(const std::vector<std::pair<int, int>>& term_ranges,
                                 const Eigen::VectorXd& influence_diag);

}  // namespace gevreg
