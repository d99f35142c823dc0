#include "gradecast/model_config.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gradecast/error.hpp"

namespace gradecast {
namespace {

constexpr std::array<std::string_view, 1> kLinear{"fit_intercept"};
constexpr std::array<std::string_view, 3> kLogistic{"C", "max_iter", "fit_intercept"};
constexpr std::array<std::string_view, 4> kTree{"max_depth", "min_samples_split", "min_samples_leaf", "max_features"};
constexpr std::array<std::string_view, 6> kForest{"n_estimators", "bootstrap",        "max_depth",
                                                  "min_samples_split", "min_samples_leaf", "max_features"};

Error bad_value(std::string_view name, const nlohmann::json& v) {
    return Error(ErrorCode::InvalidConfig, "invalid value " + v.dump() + " for hyperparameter '" + std::string(name) + "'");
}

int as_int(std::string_view name, const nlohmann::json& v) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d) return static_cast<int>(d);
    }
    throw bad_value(name, v);
}

bool as_bool(std::string_view name, const nlohmann::json& v) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) {
        if (v == "true" || v == "True") return true;
        if (v == "false" || v == "False") return false;
    }
    throw bad_value(name, v);
}

}  // namespace

std::string_view to_string(Family family) noexcept {
    switch (family) {
        case Family::Linear: return "linear";
        case Family::Logistic: return "logistic";
        case Family::Tree: return "tree";
        case Family::Forest: return "forest";
    }
    return "linear";
}

std::string_view to_string(Task task) noexcept {
    return task == Task::Classification ? "classification" : "regression";
}

Family parse_family(std::string_view s) {
    if (s == "linear") return Family::Linear;
    if (s == "logistic") return Family::Logistic;
    if (s == "tree") return Family::Tree;
    if (s == "forest") return Family::Forest;
    throw Error(ErrorCode::InvalidConfig, "unknown model family '" + std::string(s) + "'");
}

Task parse_task(std::string_view s) {
    if (s == "classification") return Task::Classification;
    if (s == "regression") return Task::Regression;
    throw Error(ErrorCode::InvalidConfig, "unknown task '" + std::string(s) + "'");
}

std::size_t MaxFeatures::resolve(std::size_t p) const noexcept {
    switch (rule) {
        case Rule::Sqrt: return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p)))));
        case Rule::All: return p;
        case Rule::Fraction:
            return std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(fraction * static_cast<double>(p))), 1, p);
    }
    return p;
}

std::span<const std::string_view> canonical_hyperparameters(Family family) noexcept {
    switch (family) {
        case Family::Linear: return kLinear;
        case Family::Logistic: return kLogistic;
        case Family::Tree: return kTree;
        case Family::Forest: return kForest;
    }
    return {};
}

ModelConfig default_config(Family family, Task task) {
    ModelConfig cfg;
    cfg.family = family;
    cfg.task = task;
    if (family == Family::Forest)
        cfg.hp.max_features.rule = task == Task::Classification ? MaxFeatures::Rule::Sqrt : MaxFeatures::Rule::All;
    return cfg;
}

void validate_config(const ModelConfig& cfg) {
    if (cfg.family == Family::Linear && cfg.task != Task::Regression)
        throw Error(ErrorCode::InvalidConfig, "linear regression only supports the regression task");
    if (cfg.family == Family::Logistic && cfg.task != Task::Classification)
        throw Error(ErrorCode::InvalidConfig, "logistic regression only supports the classification task");
    const auto& hp = cfg.hp;
    if (!(hp.C > 0.0) || !std::isfinite(hp.C)) throw Error(ErrorCode::InvalidConfig, "C must be positive");
    if (hp.max_iter < 1) throw Error(ErrorCode::InvalidConfig, "max_iter must be >= 1");
    if (hp.max_depth && *hp.max_depth < 1) throw Error(ErrorCode::InvalidConfig, "max_depth must be >= 1");
    if (hp.min_samples_split < 2) throw Error(ErrorCode::InvalidConfig, "min_samples_split must be >= 2");
    if (hp.min_samples_leaf < 1) throw Error(ErrorCode::InvalidConfig, "min_samples_leaf must be >= 1");
    if (hp.n_estimators < 1) throw Error(ErrorCode::InvalidConfig, "n_estimators must be >= 1");
    if (hp.max_features.rule == MaxFeatures::Rule::Fraction &&
        !(hp.max_features.fraction > 0.0 && hp.max_features.fraction <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "max_features fraction must lie in (0, 1]");
}

void set_hyperparameter(ModelConfig& cfg, std::string_view name, const nlohmann::json& value) {
    const auto names = canonical_hyperparameters(cfg.family);
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw Error(ErrorCode::UnknownAxis, "'" + std::string(name) + "' is not a hyperparameter of the " +
                                                std::string(to_string(cfg.family)) + " family");
    auto& hp = cfg.hp;
    if (name == "C") {
        if (!value.is_number()) throw bad_value(name, value);
        hp.C = value.get<double>();
    } else if (name == "max_iter") {
        hp.max_iter = as_int(name, value);
    } else if (name == "fit_intercept") {
        hp.fit_intercept = as_bool(name, value);
    } else if (name == "max_depth") {
        if (value.is_null() || value == "none" || value == "None") hp.max_depth.reset();
        else hp.max_depth = as_int(name, value);
    } else if (name == "min_samples_split") {
        hp.min_samples_split = as_int(name, value);
    } else if (name == "min_samples_leaf") {
        hp.min_samples_leaf = as_int(name, value);
    } else if (name == "n_estimators") {
        hp.n_estimators = as_int(name, value);
    } else if (name == "bootstrap") {
        hp.bootstrap = as_bool(name, value);
    } else if (name == "max_features") {
        if (value.is_null() || value == "all" || value == "None" || value == "none") {
            hp.max_features = {MaxFeatures::Rule::All, 1.0};
        } else if (value == "sqrt") {
            hp.max_features = {MaxFeatures::Rule::Sqrt, 1.0};
        } else if (value.is_number()) {
            hp.max_features = {MaxFeatures::Rule::Fraction, value.get<double>()};
        } else {
            throw bad_value(name, value);
        }
    }
}

nlohmann::json get_hyperparameter(const ModelConfig& cfg, std::string_view name) {
    const auto& hp = cfg.hp;
    if (name == "C") return hp.C;
    if (name == "max_iter") return hp.max_iter;
    if (name == "fit_intercept") return hp.fit_intercept;
    if (name == "max_depth") return hp.max_depth ? nlohmann::json(*hp.max_depth) : nlohmann::json(nullptr);
    if (name == "min_samples_split") return hp.min_samples_split;
    if (name == "min_samples_leaf") return hp.min_samples_leaf;
    if (name == "n_estimators") return hp.n_estimators;
    if (name == "bootstrap") return hp.bootstrap;
    if (name == "max_features") {
        switch (hp.max_features.rule) {
            case MaxFeatures::Rule::Sqrt: return "sqrt";
            case MaxFeatures::Rule::All: return "all";
            case MaxFeatures::Rule::Fraction: return hp.max_features.fraction;
        }
    }
    throw Error(ErrorCode::UnknownAxis, "unknown hyperparameter '" + std::string(name) + "'");
}

nlohmann::json hyperparameters_to_json(const ModelConfig& cfg) {
    nlohmann::json out = nlohmann::json::object();
    for (auto name : canonical_hyperparameters(cfg.family)) out[std::string(name)] = get_hyperparameter(cfg, name);
    return out;
}

nlohmann::json config_to_json(const ModelConfig& cfg) {
    return {{"family", to_string(cfg.family)},
            {"task", to_string(cfg.task)},
            {"hyperparameters", hyperparameters_to_json(cfg)},
            {"seed", cfg.seed}};
}

ModelConfig config_from_json(const nlohmann::json& doc) {
    try {
        auto cfg = default_config(parse_family(doc.at("family").get<std::string>()),
                                  parse_task(doc.at("task").get<std::string>()));
        if (doc.contains("hyperparameters"))
            for (const auto& [name, value] : doc.at("hyperparameters").items()) set_hyperparameter(cfg, name, value);
        if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
        validate_config(cfg);
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed model config: ") + e.what());
    }
}

std::string model_key(Family family, Task task) {
    switch (family) {
        case Family::Linear: return "linear_regression";
        case Family::Logistic: return "logistic_regression";
        case Family::Tree: return task == Task::Classification ? "decision_tree_classifier" : "decision_tree_regressor";
        case Family::Forest: return task == Task::Classification ? "random_forest_classifier" : "random_forest_regressor";
    }
    return "model";
}

std::string model_label(Family family, Task task) {
    switch (family) {
        case Family::Linear: return "Linear Regression";
        case Family::Logistic: return "Logistic Regression";
        case Family::Tree: return task == Task::Classification ? "Decision Tree Classifier" : "Decision Tree Regressor";
        case Family::Forest: return task == Task::Classification ? "Random Forest Classifier" : "Random Forest Regressor";
    }
    return "Model";
}

int complexity_rank(Family family) noexcept {
    switch (family) {
        case Family::Linear:
        case Family::Logistic: return 0;
        case Family::Tree: return 1;
        case Family::Forest: return 2;
    }
    return 3;
}

}  // namespace gradecast
