#include "icsim/detect/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace icsim::detect {

using nlohmann::json;

namespace {

json matrix_to_json(const FeatureMatrix& m)
{
    json rows = json::array();
    for (std::size_t i = 0; i < m.n; ++i) {
        json row = json::array();
        for (double v : m.row(i))
            row.push_back(v);
        rows.push_back(std::move(row));
    }
    return rows;
}

FeatureMatrix matrix_from_json(const json& j)
{
    FeatureMatrix m;
    for (const auto& row : j) {
        std::vector<double> r = row.get<std::vector<double>>();
        m.push_row(r);
    }
    return m;
}

} // namespace

void save_model(const AnomalyModel& model, const std::string& path)
{
    json j;
    j["kind"] = model.kind();
    j["platform"] = model.platform;
    j["columns"] = model.columns;
    j["training_fingerprint"] = model.training_fingerprint;

    if (const auto* m = model.as<OcsvmModel>()) {
        j["nu"] = m->nu;
        j["gamma"] = m->gamma;
        j["rho"] = m->rho;
        j["dim"] = m->dim;
        j["alpha"] = m->alpha;
        j["support_vectors"] = matrix_to_json(m->support_vectors);
    } else if (const auto* m = model.as<IsolationForest>()) {
        j["dim"] = m->dim;
        j["subsample"] = m->subsample;
        j["normalizer"] = m->normalizer;
        j["score_threshold"] = m->score_threshold;
        json trees = json::array();
        for (const auto& t : m->trees) {
            json nodes = json::array();
            for (const auto& n : t.nodes)
                nodes.push_back({n.feature, n.split, n.left, n.right, n.size});
            trees.push_back(std::move(nodes));
        }
        j["trees"] = std::move(trees);
    } else if (const auto* m = model.as<LofModel>()) {
        j["k"] = m->k;
        j["threshold"] = m->threshold;
        j["train"] = matrix_to_json(m->train);
        j["k_distance"] = m->k_distance;
        j["lrd"] = m->lrd;
        json nbrs = json::array();
        for (const auto& v : m->neighbors)
            nbrs.push_back(v);
        j["neighbors"] = std::move(nbrs);
    } else if (const auto* m = model.as<GaussianModel>()) {
        j["mode"] = m->mode == GaussianModel::Mode::independent ? "independent" : "multivariate";
        j["mean"] = m->mean;
        j["variance"] = m->variance;
        j["covariance_chol"] = m->covariance_chol;
        j["lambda"] = m->lambda;
        j["log_epsilon"] = m->log_epsilon;
    } else {
        throw std::invalid_argument("save_model: empty model");
    }

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write model file: " + path);
    out << j.dump() << "\n";
}

AnomalyModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open model file: " + path);
    json j;
    in >> j;

    const std::string kind = j.at("kind").get<std::string>();
    AnomalyModel model;
    if (kind == "ocsvm") {
        OcsvmModel m;
        m.nu = j.at("nu").get<double>();
        m.gamma = j.at("gamma").get<double>();
        m.rho = j.at("rho").get<double>();
        m.dim = j.at("dim").get<std::size_t>();
        m.alpha = j.at("alpha").get<std::vector<double>>();
        m.support_vectors = matrix_from_json(j.at("support_vectors"));
        model = AnomalyModel(std::move(m));
    } else if (kind == "iforest") {
        IsolationForest m;
        m.dim = j.at("dim").get<std::size_t>();
        m.subsample = j.at("subsample").get<std::size_t>();
        m.normalizer = j.at("normalizer").get<double>();
        m.score_threshold = j.at("score_threshold").get<double>();
        for (const auto& jt : j.at("trees")) {
            IsolationForest::Tree t;
            for (const auto& jn : jt) {
                IsolationForest::Node n;
                n.feature = jn.at(0).get<int>();
                n.split = jn.at(1).get<double>();
                n.left = jn.at(2).get<std::int32_t>();
                n.right = jn.at(3).get<std::int32_t>();
                n.size = jn.at(4).get<std::int32_t>();
                t.nodes.push_back(n);
            }
            m.trees.push_back(std::move(t));
        }
        model = AnomalyModel(std::move(m));
    } else if (kind == "lof") {
        LofModel m;
        m.k = j.at("k").get<std::size_t>();
        m.threshold = j.at("threshold").get<double>();
        m.train = matrix_from_json(j.at("train"));
        m.k_distance = j.at("k_distance").get<std::vector<double>>();
        m.lrd = j.at("lrd").get<std::vector<double>>();
        for (const auto& v : j.at("neighbors"))
            m.neighbors.push_back(v.get<std::vector<std::size_t>>());
        model = AnomalyModel(std::move(m));
    } else if (kind == "gaussian") {
        GaussianModel m;
        m.mode = j.at("mode").get<std::string>() == "independent"
                     ? GaussianModel::Mode::independent
                     : GaussianModel::Mode::multivariate;
        m.mean = j.at("mean").get<std::vector<double>>();
        m.variance = j.at("variance").get<std::vector<double>>();
        m.covariance_chol = j.at("covariance_chol").get<std::vector<double>>();
        m.lambda = j.at("lambda").get<double>();
        m.log_epsilon = j.at("log_epsilon").get<double>();
        model = AnomalyModel(std::move(m));
    } else {
        throw std::runtime_error("load_model: unknown kind " + kind);
    }

    model.platform = j.value("platform", std::string());
    model.columns = j.value("columns", std::vector<std::string>{});
    model.training_fingerprint = j.value("training_fingerprint", std::string());
    return model;
}

std::string file_fingerprint(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file for fingerprint: " + path);
    std::uint64_t hash = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        hash ^= static_cast<std::uint8_t>(c);
        hash *= 1099511628211ull;
    }
    std::ostringstream ss;
    ss << std::hex << hash;
    return ss.str();
}

} // namespace icsim::detect
