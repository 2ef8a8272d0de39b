#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gevreg {

// Rectangular table of numeric features with explicit per-cell missingness
// plus a binary default response. Missing cells hold NaN; the loader and all
// generators guarantee that non-missing cells are finite, so NaN is an
// unambiguous missing flag. Immutable after construction by convention.
struct Dataset {
    std::vector<std::string> feature_names;
    Eigen::MatrixXd x;   // n x p, NaN marks a missing cell
    Eigen::VectorXi y;   // each entry exactly 0 or 1

    int n() const { return static_cast<int>(x.rows()); }
    int p() const { return static_cast<int>(x.cols()); }

    bool is_missing(int i, int j) const { return std::isnan(x(i, j)); }

    bool complete() const;
    int n_default() const;

    // column index by name; throws std::invalid_argument for unknown names
    int col(const std::string& name) const;

    // validates all invariants (y binary, non-missing cells finite, n,p >= 1)
    static Dataset make(std::vector<std::string> names, Eigen::MatrixXd x, Eigen::VectorXi y);
};

// CSV: UTF-8, comma-delimited, mandatory header, "." decimal separator.
// Empty cells and the literal token "NA" parse as missing; everything else
// must parse as a finite real. Malformed cells are reported with their
// 1-based data row and column name.
Dataset load_csv(const std::string& path, const std::string& response_name);

// Inverse of load_csv: missing cells are written as empty fields, numbers in
// shortest round-trip form.
void save_csv(const Dataset& ds, const std::string& path, const std::string& response_name = "y");

// Stratified train/control partition: defaults and non-defaults are split
// independently, train class size = round-half-up(fraction * class size).
// Deterministic in (ds, train_fraction, seed); the two parts together are a
// permutation of the input rows.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_fraction, std::uint64_t seed);

// Row subset in the given order.
Dataset take_rows(const Dataset& ds, const std::vector<int>& rows);

}  // namespace gevreg
