#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <string>
#include <vector>

#include "gevreg/dataset.hpp"

namespace gevreg {

struct WoeBin {
    long long b = 0;  // bads (defaults)
    long long g = 0;  // goods
    double woe = 0.0;

    long long count() const { return b + g; }
    double bad_rate() const { return count() > 0 ? static_cast<double>(b) / static_cast<double>(count()) : 0.0; }
};

// Quantile fine-classing of one numeric feature with a dedicated missing bin.
// Finite bin i covers (edges[i-1], edges[i]], with bin 0 = (-inf, edges[0]]
// and the last bin open to +inf, so the bins partition the real line.
//
// woe = ln((b_i + c) G+ / ((g_i + c) B+)) with smoothing c = 0.5 switched on
// only when some nonempty bin has b_i = 0 or g_i = 0; B+, G+ are the totals
// consistent with the offset. An empty missing bin carries woe 0.
struct WoeTable {
    std::string feature;
    std::vector<double> edges;
    std::vector<WoeBin> bins;  // size edges.size() + 1
    WoeBin missing_bin;
    long long B = 0;  // total bads, including the missing bin
    long long G = 0;  // total goods, including the missing bin
    double smoothing = 0.0;

    // finite-bin index for a non-missing value
    int bin_index(double value) const;
};

WoeTable woe_fit(const Dataset& train, const std::string& feature, int n_bins = 10);

// Greedy left-to-right merge of adjacent finite bins whose bad-rate gap is
// below min_rate_gap or whose count is below min_bin_count. The missing bin
// is never merged; woe values are recomputed afterwards.
WoeTable coarse_merge(const WoeTable& table, double min_rate_gap, long long min_bin_count);

// Replace each value by its bin's woe; missing values get the missing bin's
// woe, out-of-range values fall into the first/last finite bin. The output
// never contains missing values.
Eigen::VectorXd woe_transform(const WoeTable& table, const Eigen::VectorXd& values);

nlohmann::json woe_to_json(const WoeTable& table);
WoeTable woe_from_json(const nlohmann::json& j);

// Fit one table per feature on the training data (with optional coarse
// merging), and re-encode a dataset through fitted tables.
std::vector<WoeTable> woe_fit_all(const Dataset& train, int n_bins, double min_rate_gap, long long min_bin_count);
Dataset woe_apply(const std::vector<WoeTable>& tables, const Dataset& ds);

}  // namespace gevreg
