#include "gevreg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gevreg/rng.hpp"
#include "gevreg/stats.hpp"

namespace gevreg {

bool Dataset::complete() const {
    for (int j = 0; j < p(); ++j) {
        for (int i = 0; i < n(); ++i) {
            if (std::isnan(x(i, j))) return false;
        }
    }
    return true;
}

int Dataset::n_default() const { return y.sum(); }

int Dataset::col(const std::string& name) const {
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
        if (feature_names[j] == name) return static_cast<int>(j);
    }
    throw std::invalid_argument("Dataset: unknown feature '" + name + "'");
}

Dataset Dataset::make(std::vector<std::string> names, Eigen::MatrixXd x, Eigen::VectorXi y) {
    if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("Dataset: n >= 1 and p >= 1 required");
    if (static_cast<Eigen::Index>(names.size()) != x.cols()) {
        throw std::invalid_argument("Dataset: feature name count does not match column count");
    }
    if (y.size() != x.rows()) throw std::invalid_argument("Dataset: response length does not match row count");
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 0 && y(i) != 1) throw std::invalid_argument("Dataset: response values must be 0 or 1");
    }
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (!std::isnan(x(i, j)) && !std::isfinite(x(i, j))) {
                throw std::invalid_argument("Dataset: non-missing cells must be finite");
            }
        }
    }
    Dataset ds;
    ds.feature_names = std::move(names);
    ds.x = std::move(x);
    ds.y = std::move(y);
    return ds;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& response_name) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: '" + path + "' is empty (header row required)");
    std::vector<std::string> header = split_line(line);
    for (auto& h : header) h = trim(h);

    int resp_col = -1;
    std::vector<std::string> names;
    std::vector<int> feat_cols;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == response_name) {
            if (resp_col >= 0) throw std::runtime_error("load_csv: duplicate response column '" + response_name + "'");
            resp_col = static_cast<int>(j);
        } else {
            names.push_back(header[j]);
            feat_cols.push_back(static_cast<int>(j));
        }
    }
    if (resp_col < 0) throw std::runtime_error("load_csv: response column '" + response_name + "' absent");
    if (names.empty()) throw std::runtime_error("load_csv: no feature columns");

    std::vector<std::vector<double>> rows;
    std::vector<int> ys;
    int row_no = 0;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof()) break;
        ++row_no;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("load_csv: row " + std::to_string(row_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        }
        const std::string yc = trim(cells[resp_col]);
        if (yc != "0" && yc != "1") {
            throw std::runtime_error("load_csv: row " + std::to_string(row_no) + ", column '" + response_name +
                                     "': response value '" + yc + "' outside {0,1}");
        }
        ys.push_back(yc == "1" ? 1 : 0);
        std::vector<double> r(feat_cols.size());
        for (std::size_t k = 0; k < feat_cols.size(); ++k) {
            const std::string cell = trim(cells[feat_cols[k]]);
            if (cell.empty() || cell == "NA") {
                r[k] = std::numeric_limits<double>::quiet_NaN();
            } else if (!parse_double(cell, r[k])) {
                throw std::runtime_error("load_csv: row " + std::to_string(row_no) + ", column '" + names[k] +
                                         "': cannot parse '" + cell + "' as a finite real");
            }
        }
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw std::runtime_error("load_csv: no data rows in '" + path + "'");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
    Eigen::VectorXi y(static_cast<Eigen::Index>(ys.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        y(static_cast<Eigen::Index>(i)) = ys[i];
        for (std::size_t j = 0; j < names.size(); ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return Dataset::make(std::move(names), std::move(x), std::move(y));
}

void save_csv(const Dataset& ds, const std::string& path, const std::string& response_name) {
    std::ostringstream out;
    for (std::size_t j = 0; j < ds.feature_names.size(); ++j) {
        out << ds.feature_names[j] << ',';
    }
    out << response_name << '\n';
    char buf[64];
    for (int i = 0; i < ds.n(); ++i) {
        for (int j = 0; j < ds.p(); ++j) {
            if (!ds.is_missing(i, j)) {
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), ds.x(i, j));
                out.write(buf, ptr - buf);
            }
            out << ',';
        }
        out << ds.y(i) << '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_csv: cannot write '" + path + "'");
    f << out.str();
}

Dataset take_rows(const Dataset& ds, const std::vector<int>& rows) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), ds.p());
    Eigen::VectorXi y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = ds.x.row(rows[i]);
        y(static_cast<Eigen::Index>(i)) = ds.y(rows[i]);
    }
    Dataset out;
    out.feature_names = ds.feature_names;
    out.x = std::move(x);
    out.y = std::move(y);
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw std::invalid_argument("stratified_split: train_fraction must lie in (0, 1)");
    }
    std::vector<int> defaults, goods;
    for (int i = 0; i < ds.n(); ++i) (ds.y(i) == 1 ? defaults : goods).push_back(i);
    if (defaults.size() < 2 || goods.size() < 2) {
        throw std::invalid_argument("stratified_split: each class needs at least 2 members");
    }

    Rng rng(seed);
    std::vector<int> train, test;
    for (std::vector<int>* cls : {&defaults, &goods}) {
        rng.shuffle(*cls);
        const auto k = static_cast<std::size_t>(round_half_up(train_fraction * static_cast<double>(cls->size())));
        for (std::size_t i = 0; i < cls->size(); ++i) (i < k ? train : test).push_back((*cls)[i]);
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {take_rows(ds, train), take_rows(ds, test)};
}

}  // namespace gevreg
