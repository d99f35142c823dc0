#include "gradecast/artifact.hpp"

#include <fstream>
#include <sstream>

#include "gradecast/error.hpp"

namespace gradecast {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "gradecast-model";

Error corrupt(const std::string& why) { return Error(ErrorCode::CorruptArtifact, "corrupt model artifact: " + why); }

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json cell_to_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return nullptr;
}

Cell cell_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    return Missing{};
}

json tree_to_json(const TreeModel& t) {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         weight = json::array(), impurity = json::array(), value = json::array();
    for (const auto& n : t.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        weight.push_back(n.weight);
        impurity.push_back(n.impurity);
        value.push_back(n.value);
    }
    return {{"task", to_string(t.task)}, {"n_features", t.n_features}, {"feature", feature}, {"threshold", threshold},
            {"left", left},           {"right", right},                {"weight", weight},   {"impurity", impurity},
            {"value", value}};
}

TreeModel tree_from_json(const json& j) {
    TreeModel t;
    t.task = parse_task(j.at("task").get<std::string>());
    t.n_features = j.at("n_features").get<std::size_t>();
    const auto feature = j.at("feature").get<std::vector<int>>();
    const auto threshold = j.at("threshold").get<std::vector<double>>();
    const auto left = j.at("left").get<std::vector<int>>();
    const auto right = j.at("right").get<std::vector<int>>();
    const auto weight = j.at("weight").get<std::vector<double>>();
    const auto impurity = j.at("impurity").get<std::vector<double>>();
    const auto value = j.at("value").get<std::vector<std::vector<double>>>();
    const auto n = feature.size();
    if (n == 0) throw corrupt("tree without nodes");
    if (threshold.size() != n || left.size() != n || right.size() != n || weight.size() != n || impurity.size() != n ||
        value.size() != n)
        throw corrupt("tree node arrays differ in length");
    const std::size_t value_len = t.task == Task::Classification ? 2 : 1;
    t.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& node = t.nodes[i];
        node.feature = feature[i];
        node.threshold = threshold[i];
        node.left = left[i];
        node.right = right[i];
        node.weight = weight[i];
        node.impurity = impurity[i];
        node.value = value[i];
        if (node.value.size() != value_len) throw corrupt("tree node value has the wrong length");
        if (node.feature >= 0) {
            const auto in_range = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(n); };
            if (static_cast<std::size_t>(node.feature) >= t.n_features || !in_range(node.left) || !in_range(node.right))
                throw corrupt("tree node " + std::to_string(i) + " has out-of-range links");
        }
    }
    return t;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json parameters_to_json(const ModelParameters& params) {
    return std::visit(
        overloaded{
            [](const LinearModel& m) -> json { return {{"weights", vector_to_json(m.weights)}, {"intercept", m.intercept}}; },
            [](const LogisticModel& m) -> json {
                return {{"weights", vector_to_json(m.weights)},
                        {"intercept", m.intercept},
                        {"C", m.C},
                        {"converged", m.converged},
                        {"iterations", m.iterations}};
            },
            [](const TreeModel& m) -> json { return tree_to_json(m); },
            [](const ForestModel& m) -> json {
                json trees = json::array();
                for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
                return {{"task", to_string(m.task)},
                        {"n_features", m.n_features},
                        {"bootstrap", m.bootstrap},
                        {"seed", m.seed},
                        {"trees", std::move(trees)}};
            },
        },
        params);
}

ModelParameters parameters_from_json(const ModelConfig& cfg, const json& j, std::size_t n_features) {
    switch (cfg.family) {
        case Family::Linear: {
            LinearModel m{vector_from_json(j.at("weights")), j.at("intercept").get<double>()};
            if (static_cast<std::size_t>(m.weights.size()) != n_features) throw corrupt("weight count mismatch");
            return m;
        }
        case Family::Logistic: {
            LogisticModel m;
            m.weights = vector_from_json(j.at("weights"));
            m.intercept = j.at("intercept").get<double>();
            m.C = j.at("C").get<double>();
            m.converged = j.at("converged").get<bool>();
            m.iterations = j.at("iterations").get<int>();
            if (static_cast<std::size_t>(m.weights.size()) != n_features) throw corrupt("weight count mismatch");
            return m;
        }
        case Family::Tree: {
            auto t = tree_from_json(j);
            if (t.n_features != n_features || t.task != cfg.task) throw corrupt("tree shape mismatch");
            return t;
        }
        case Family::Forest: {
            ForestModel f;
            f.task = parse_task(j.at("task").get<std::string>());
            f.n_features = j.at("n_features").get<std::size_t>();
            f.bootstrap = j.at("bootstrap").get<bool>();
            f.seed = j.at("seed").get<std::uint64_t>();
            f.max_features = cfg.hp.max_features;
            for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_json(t));
            if (f.trees.empty()) throw corrupt("forest without trees");
            if (f.n_features != n_features || f.task != cfg.task) throw corrupt("forest shape mismatch");
            for (const auto& t : f.trees)
                if (t.n_features != n_features || t.task != cfg.task) throw corrupt("forest tree shape mismatch");
            return f;
        }
    }
    throw corrupt("unknown family");
}

}  // namespace

json norm_to_json(const NormParams& norm) {
    json features = json::array();
    for (const auto& f : norm.features) {
        json fj{{"name", f.name}, {"kind", to_string(f.kind)}, {"min", f.min}, {"max", f.max}, {"fill", cell_to_json(f.fill)}};
        if (f.kind == ColumnKind::Categorical) fj["categories"] = f.categories;
        if (f.valid_range) fj["valid_range"] = {f.valid_range->min, f.valid_range->max};
        features.push_back(std::move(fj));
    }
    return {{"features", std::move(features)},
            {"target", {norm.target.min, norm.target.max}},
            {"pass_threshold", norm.pass_threshold}};
}

NormParams norm_from_json(const json& doc) {
    NormParams norm;
    for (const auto& fj : doc.at("features")) {
        FeatureScaling f;
        f.name = fj.at("name").get<std::string>();
        const auto kind = fj.at("kind").get<std::string>();
        if (kind != "numeric" && kind != "categorical") throw corrupt("unknown feature kind '" + kind + "'");
        f.kind = kind == "numeric" ? ColumnKind::Numeric : ColumnKind::Categorical;
        f.min = fj.at("min").get<double>();
        f.max = fj.at("max").get<double>();
        if (!(f.min <= f.max)) throw corrupt("feature '" + f.name + "' has min > max");
        f.fill = cell_from_json(fj.value("fill", json(nullptr)));
        if (fj.contains("categories")) f.categories = fj.at("categories").get<std::vector<std::string>>();
        if (fj.contains("valid_range"))
            f.valid_range = Range{fj.at("valid_range").at(0).get<double>(), fj.at("valid_range").at(1).get<double>()};
        norm.features.push_back(std::move(f));
    }
    norm.target = Range{doc.at("target").at(0).get<double>(), doc.at("target").at(1).get<double>()};
    norm.pass_threshold = doc.at("pass_threshold").get<double>();
    return norm;
}

json artifact_to_json(const ModelArtifact& a) {
    return {{"format", kFormatTag},
            {"format_version", a.format_version},
            {"config", config_to_json(a.model.config)},
            {"feature_names", a.model.feature_names},
            {"parameters", parameters_to_json(a.model.parameters)},
            {"norm", norm_to_json(a.norm)},
            {"training_fingerprint",
             {{"rows", a.fingerprint.rows}, {"features", a.fingerprint.features}, {"seed", a.fingerprint.seed}}}};
}

ModelArtifact artifact_from_json(const json& doc) {
    try {
        if (!doc.is_object() || doc.value("format", std::string{}) != kFormatTag) throw corrupt("missing format tag");
        const int version = doc.at("format_version").get<int>();
        if (version != kArtifactFormatVersion)
            throw Error(ErrorCode::VersionMismatch, "artifact format_version " + std::to_string(version) +
                                                        " is not supported (expected " +
                                                        std::to_string(kArtifactFormatVersion) + ")");
        ModelArtifact a;
        a.format_version = version;
        a.model.config = config_from_json(doc.at("config"));
        a.model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        a.model.parameters = parameters_from_json(a.model.config, doc.at("parameters"), a.model.feature_names.size());
        a.norm = norm_from_json(doc.at("norm"));
        if (a.norm.features.size() != a.model.feature_names.size()) throw corrupt("norm feature count mismatch");
        const auto& fp = doc.at("training_fingerprint");
        a.fingerprint = {fp.at("rows").get<std::size_t>(), fp.at("features").get<std::size_t>(),
                         fp.at("seed").get<std::uint64_t>()};
        return a;
    } catch (const json::exception& e) {
        throw corrupt(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::VersionMismatch || e.code() == ErrorCode::CorruptArtifact) throw;
        throw corrupt(e.what());
    }
}

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path) {
    const auto text = artifact_to_json(artifact).dump();
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write " + tmp.string());
        out << text << '\n';
        if (!out) throw Error(ErrorCode::FileUnreadable, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ModelArtifact load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open model artifact " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw corrupt(e.what());
    }
    return artifact_from_json(doc);
}

}  // namespace gradecast
