#include "gevreg/woe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gevreg {

namespace {

// assigns woe values given final counts; smoothing only if a nonempty bin
// has a zero cell
void compute_woe(WoeTable& t) {
    bool need_smoothing = false;
    auto check = [&](const WoeBin& bin) {
        if (bin.count() > 0 && (bin.b == 0 || bin.g == 0)) need_smoothing = true;
    };
    for (const auto& bin : t.bins) check(bin);
    check(t.missing_bin);
    const double c = need_smoothing ? 0.5 : 0.0;
    t.smoothing = c;

    long long m = 0;
    for (const auto& bin : t.bins) {
        if (bin.count() > 0) ++m;
    }
    if (t.missing_bin.count() > 0) ++m;
    const double Bp = static_cast<double>(t.B) + c * static_cast<double>(m);
    const double Gp = static_cast<double>(t.G) + c * static_cast<double>(m);

    auto woe_of = [&](const WoeBin& bin) {
        if (bin.count() == 0) return 0.0;
        return std::log((static_cast<double>(bin.b) + c) * Gp / ((static_cast<double>(bin.g) + c) * Bp));
    };
    for (auto& bin : t.bins) bin.woe = woe_of(bin);
    t.missing_bin.woe = woe_of(t.missing_bin);
}

}  // namespace

int WoeTable::bin_index(double value) const {
    const auto it = std::upper_bound(edges.begin(), edges.end(), value);
    return static_cast<int>(it - edges.begin());
}

WoeTable woe_fit(const Dataset& train, const std::string& feature, int n_bins) {
    if (n_bins < 1) throw std::invalid_argument("woe_fit: n_bins >= 1 required");
    const int j = train.col(feature);

    WoeTable t;
    t.feature = feature;
    t.B = train.n_default();
    t.G = train.n() - t.B;
    if (t.B == 0 || t.G == 0) throw std::invalid_argument("woe_fit: both classes must be present");

    std::vector<double> obs;
    obs.reserve(static_cast<std::size_t>(train.n()));
    for (int i = 0; i < train.n(); ++i) {
        if (!train.is_missing(i, j)) obs.push_back(train.x(i, j));
    }
    if (obs.empty()) throw std::invalid_argument("woe_fit: feature '" + feature + "' is entirely missing");
    std::sort(obs.begin(), obs.end());

    // cut points at empirical quantiles; duplicates collapse, cuts equal to
    // the maximum are dropped so every bin is nonempty
    const auto n = static_cast<long long>(obs.size());
    for (int k = 1; k < n_bins; ++k) {
        const long long r = n * k / n_bins;
        if (r < 1) continue;
        const double e = obs[static_cast<std::size_t>(r - 1)];
        if (e >= obs.back()) continue;
        if (t.edges.empty() || e > t.edges.back()) t.edges.push_back(e);
    }

    t.bins.assign(t.edges.size() + 1, WoeBin{});
    for (int i = 0; i < train.n(); ++i) {
        WoeBin& bin = train.is_missing(i, j) ? t.missing_bin : t.bins[static_cast<std::size_t>(t.bin_index(train.x(i, j)))];
        if (train.y(i) == 1) {
            ++bin.b;
        } else {
            ++bin.g;
        }
    }
    compute_woe(t);
    return t;
}

WoeTable coarse_merge(const WoeTable& table, double min_rate_gap, long long min_bin_count) {
    WoeTable t = table;
    std::size_t i = 0;
    while (i + 1 < t.bins.size()) {
        const WoeBin& cur = t.bins[i];
        const WoeBin& nxt = t.bins[i + 1];
        const bool close_rates = std::fabs(cur.bad_rate() - nxt.bad_rate()) < min_rate_gap;
        const bool small = cur.count() < min_bin_count || nxt.count() < min_bin_count;
        if (close_rates || small) {
            t.bins[i].b += nxt.b;
            t.bins[i].g += nxt.g;
            t.bins.erase(t.bins.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            t.edges.erase(t.edges.begin() + static_cast<std::ptrdiff_t>(i));
            // re-examine the merged bin against its new right neighbour
        } else {
            ++i;
        }
    }
    compute_woe(t);
    return t;
}

Eigen::VectorXd woe_transform(const WoeTable& table, const Eigen::VectorXd& values) {
    Eigen::VectorXd out(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out(i) = std::isnan(values(i)) ? table.missing_bin.woe
                                       : table.bins[static_cast<std::size_t>(table.bin_index(values(i)))].woe;
    }
    return out;
}

nlohmann::json woe_to_json(const WoeTable& t) {
    nlohmann::json j;
    j["feature"] = t.feature;
    j["edges"] = t.edges;
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : t.bins) bins.push_back({{"b", b.b}, {"g", b.g}, {"woe", b.woe}});
    j["bins"] = std::move(bins);
    j["missing_bin"] = {{"b", t.missing_bin.b}, {"g", t.missing_bin.g}, {"woe", t.missing_bin.woe}};
    j["B"] = t.B;
    j["G"] = t.G;
    j["smoothing"] = t.smoothing;
    return j;
}

WoeTable woe_from_json(const nlohmann::json& j) {
    WoeTable t;
    t.feature = j["feature"].get<std::string>();
    t.edges = j["edges"].get<std::vector<double>>();
    for (const auto& b : j["bins"]) {
        t.bins.push_back({b["b"].get<long long>(), b["g"].get<long long>(), b["woe"].get<double>()});
    }
    t.missing_bin = {j["missing_bin"]["b"].get<long long>(), j["missing_bin"]["g"].get<long long>(),
                     j["missing_bin"]["woe"].get<double>()};
    t.B = j["B"].get<long long>();
    t.G = j["G"].get<long long>();
    t.smoothing = j["smoothing"].get<double>();
    if (t.bins.size() != t.edges.size() + 1) throw std::runtime_error("woe_from_json: bin/edge count mismatch");
    return t;
}

std::vector<WoeTable> woe_fit_all(const Dataset& train, int n_bins, double min_rate_gap, long long min_bin_count) {
    std::vector<WoeTable> tables;
    tables.reserve(train.feature_names.size());
    for (const auto& f : train.feature_names) {
        WoeTable t = woe_fit(train, f, n_bins);
        if (min_rate_gap > 0.0 || min_bin_count > 0) t = coarse_merge(t, min_rate_gap, min_bin_count);
        tables.push_back(std::move(t));
    }
    return tables;
}

Dataset woe_apply(const std::vector<WoeTable>& tables, const Dataset& ds) {
    Eigen::MatrixXd x(ds.n(), static_cast<Eigen::Index>(tables.size()));
    std::vector<std::string> names;
    names.reserve(tables.size());
    for (std::size_t k = 0; k < tables.size(); ++k) {
        const int j = ds.col(tables[k].feature);
        x.col(static_cast<Eigen::Index>(k)) = woe_transform(tables[k], ds.x.col(j));
        names.push_back(tables[k].feature);
    }
    return Dataset::make(std::move(names), std::move(x), ds.y);
}

}  // namespace gevreg
