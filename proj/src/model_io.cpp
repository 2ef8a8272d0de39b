#include "gevreg/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace gevreg {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

Eigen::MatrixXd mat_from_json(const json& rows) {
    const auto nr = static_cast<Eigen::Index>(rows.size());
    const auto nc = nr > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
    Eigen::MatrixXd m(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i) {
        for (Eigen::Index j = 0; j < nc; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
    }
    return m;
}

std::string kind_str(LinkKind k) {
    switch (k) {
        case LinkKind::Logit: return "logit";
        case LinkKind::LogLog: return "loglog";
        case LinkKind::Gev: return "gev";
    }
    return "logit";
}

LinkKind kind_parse(const std::string& s) {
    if (s == "logit") return LinkKind::Logit;
    if (s == "loglog") return LinkKind::LogLog;
    if (s == "gev") return LinkKind::Gev;
    throw std::runtime_error("model_from_json: unknown link kind '" + s + "'");
}

}  // namespace

nlohmann::json model_to_json(const FittedModel& m) {
    json j;
    j["format"] = "gevreg-model";
    j["version"] = kLibraryVersion;
    j["link"] = {{"kind", kind_str(m.spec.link.kind)}, {"tau", m.spec.link.tau}, {"epsilon", m.spec.link.epsilon}};
    j["linear_terms"] = m.spec.linear_terms;
    json st = json::array();
    for (const auto& t : m.spec.smooth_terms) st.push_back({{"name", t.name}, {"K", t.basis_dim}});
    j["smooth_terms"] = std::move(st);

    j["alpha"] = m.alpha;
    j["beta"] = vec_to_json(m.beta);
    json sm = json::array();
    for (const auto& s : m.smooths) {
        sm.push_back({{"name", s.block.covariate},
                      {"K", s.block.K},
                      {"a", s.block.a},
                      {"h", s.block.h},
                      {"Z", mat_to_json(s.block.Z)},
                      {"S", mat_to_json(s.block.S)},
                      {"lambda", s.block.lambda},
                      {"gamma", vec_to_json(s.gamma)},
                      {"edf", s.edf},
                      {"est_rank", s.est_rank},
                      {"p_value", s.p_value}});
    }
    j["smooths"] = std::move(sm);
    j["lambdas"] = vec_to_json(m.lambdas);
    j["tau"] = m.tau;
    j["epsilon"] = m.spec.link.epsilon;
    j["std_errors"] = vec_to_json(m.std_errors);
    j["p_values"] = vec_to_json(m.p_values);
    j["deviance"] = m.deviance;
    j["converged"] = m.converged;
    j["iterations"] = m.iterations;
    j["cov"] = mat_to_json(m.cov);
    j["n_train"] = m.n_train;
    j["edf_total"] = m.edf_total;
    j["gcv"] = m.gcv;
    return j;
}

FittedModel model_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j["format"] != "gevreg-model") {
        throw std::runtime_error("model_from_json: not a gevreg model document");
    }
    FittedModel m;
    m.spec.link.kind = kind_parse(j["link"]["kind"].get<std::string>());
    m.spec.link.tau = j["link"]["tau"].get<double>();
    m.spec.link.epsilon = j["link"]["epsilon"].get<double>();
    m.spec.linear_terms = j["linear_terms"].get<std::vector<std::string>>();
    for (const auto& t : j["smooth_terms"]) {
        m.spec.smooth_terms.push_back({t["name"].get<std::string>(), t["K"].get<int>()});
    }
    m.alpha = j["alpha"].get<double>();
    m.beta = vec_from_json(j["beta"]);
    for (const auto& s : j["smooths"]) {
        FittedSmooth fs;
        fs.block.covariate = s["name"].get<std::string>();
        fs.block.K = s["K"].get<int>();
        fs.block.a = s["a"].get<double>();
        fs.block.h = s["h"].get<double>();
        fs.block.Z = mat_from_json(s["Z"]);
        fs.block.S = mat_from_json(s["S"]);
        fs.block.lambda = s["lambda"].get<double>();
        fs.gamma = vec_from_json(s["gamma"]);
        fs.edf = s["edf"].get<double>();
        fs.est_rank = s["est_rank"].get<int>();
        fs.p_value = s["p_value"].get<double>();
        m.smooths.push_back(std::move(fs));
    }
    m.lambdas = vec_from_json(j["lambdas"]);
    m.tau = j["tau"].get<double>();
    m.std_errors = vec_from_json(j["std_errors"]);
    m.p_values = vec_from_json(j["p_values"]);
    m.deviance = j["deviance"].get<double>();
    m.converged = j["converged"].get<bool>();
    m.iterations = j["iterations"].get<int>();
    m.cov = mat_from_json(j["cov"]);
    m.n_train = j["n_train"].get<int>();
    m.edf_total = j["edf_total"].get<double>();
    m.gcv = j["gcv"].get<double>();
    return m;
}

void save_model(const FittedModel& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_model: cannot write '" + path + "'");
    f << model_to_json(m).dump(2) << '\n';
}

FittedModel load_model(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_model: cannot open '" + path + "'");
    json j;
    f >> j;
    return model_from_json(j);
}

}  // namespace gevreg
