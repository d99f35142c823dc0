#include "gradecast/service.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "gradecast/pipeline.hpp"

namespace gradecast {

using nlohmann::json;

namespace {

ServiceResponse error_response(int status, const std::string& code, const std::string& message,
                               json fields = nullptr) {
    json body{{"error", code}, {"message", message}};
    if (!fields.is_null()) body["fields"] = std::move(fields);
    return {status, std::move(body)};
}

std::string category_token(double v) {
    if (std::floor(v) == v && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

json describe_model(const ModelArtifact& a) {
    return {{"model", model_key(a.model.config.family, a.model.config.task)},
            {"label", model_label(a.model.config.family, a.model.config.task)},
            {"family", std::string(to_string(a.model.config.family))},
            {"task", std::string(to_string(a.model.config.task))},
            {"hyperparameters", hyperparameters_to_json(a.model.config)},
            {"format_version", a.format_version},
            {"training", {{"rows", a.fingerprint.rows}, {"seed", a.fingerprint.seed}}}};
}

}  // namespace

RiskService::RiskService(ModelArtifact classifier, ModelArtifact regressor, std::vector<RiskScore> roster,
                         RiskConfig cfg, json metrics, std::optional<std::string> token)
    : classifier_(std::move(classifier)),
      regressor_(std::move(regressor)),
      metrics_(std::move(metrics)),
      token_(std::move(token)),
      top_k_(cfg.top_k),
      threshold_(cfg.threshold),
      roster_(std::move(roster)) {
    validate_risk_config(cfg);
    if (classifier_.model.task() != Task::Classification || regressor_.model.task() != Task::Regression)
        throw Error(ErrorCode::UnsupportedModel, "service needs a classification and a regression artifact");
    if (classifier_.model.feature_names != regressor_.model.feature_names || !(classifier_.norm == regressor_.norm))
        throw Error(ErrorCode::ModelPairMismatch, "classifier and regressor were trained on different features");
    if (token_ && token_->empty()) token_.reset();
    sort_roster(roster_);
    apply_threshold(roster_, threshold_);
}

bool RiskService::authorized(const std::string& authorization) const {
    return !token_ || authorization == "Bearer " + *token_;
}

std::pair<double, std::vector<RiskScore>> RiskService::snapshot() const {
    std::shared_lock lock(mutex_);
    return {threshold_, roster_};
}

ServiceResponse RiskService::roster() const {
    std::shared_lock lock(mutex_);
    return {200, roster_to_json(roster_)};
}

ServiceResponse RiskService::threshold() const {
    std::shared_lock lock(mutex_);
    return {200, {{"threshold", threshold_}}};
}

ServiceResponse RiskService::set_threshold(const std::string& body) {
    const auto doc = json::parse(body, nullptr, false);
    double value = 0.0;
    if (doc.is_number()) {
        value = doc.get<double>();
    } else if (doc.is_object() && doc.contains("threshold") && doc["threshold"].is_number()) {
        value = doc["threshold"].get<double>();
    } else {
        return error_response(400, "InvalidArgument", "body must be {\"threshold\": <number>}");
    }
    if (!(value > 0.0 && value < 1.0))
        return error_response(409, "InvalidConfig", "threshold must lie strictly between 0 and 1");
    std::unique_lock lock(mutex_);
    threshold_ = value;
    apply_threshold(roster_, threshold_);
    return {200, {{"threshold", threshold_}}};
}

ServiceResponse RiskService::predict(const std::string& body) const {
    const auto doc = json::parse(body, nullptr, false);
    if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_object())
        return error_response(400, "InvalidArgument", "body must be {\"features\": {<name>: <value>, ...}}");
    const auto& norm = classifier_.norm;
    const auto& given = doc["features"];

    json fields = json::object();
    for (const auto& [name, value] : given.items()) {
        const bool known = std::any_of(norm.features.begin(), norm.features.end(),
                                       [&](const FeatureScaling& f) { return f.name == name; });
        if (!known) fields[name] = "unknown feature";
    }
    std::vector<Cell> raw;
    for (const auto& f : norm.features) {
        Cell c = Missing{};
        if (given.contains(f.name)) {
            const auto& v = given[f.name];
            if (v.is_number()) {
                const double d = v.get<double>();
                c = f.kind == ColumnKind::Categorical ? Cell{category_token(d)} : Cell{d};
            } else if (v.is_string()) {
                c = v.get<std::string>();
            } else if (!v.is_null()) {
                fields[f.name] = "expected a number or string";
                raw.push_back(Missing{});
                continue;
            }
        }
        if (auto err = feature_value_error(f, c)) fields[f.name] = *err;
        raw.push_back(std::move(c));
    }
    if (!fields.empty()) return error_response(400, "InvalidArgument", "invalid feature values", std::move(fields));

    std::string id = doc.contains("student_id") && doc["student_id"].is_string() ? doc["student_id"].get<std::string>()
                                                                                : "what-if";
    const auto x = transform_features(norm, raw);
    RiskConfig cfg;
    cfg.top_k = top_k_;
    {
        std::shared_lock lock(mutex_);
        cfg.threshold = threshold_;
    }
    return {200, to_json(score_student(x, classifier_.model, regressor_.model, norm, cfg, std::move(id)))};
}

ServiceResponse RiskService::model() const {
    json features = json::array();
    for (const auto& f : classifier_.norm.features) {
        json entry{{"name", f.name}, {"kind", std::string(to_string(f.kind))}};
        if (f.valid_range) entry["valid_range"] = {f.valid_range->min, f.valid_range->max};
        if (f.kind == ColumnKind::Categorical) entry["categories"] = f.categories;
        features.push_back(std::move(entry));
    }
    std::shared_lock lock(mutex_);
    return {200,
            {{"format_version", kArtifactFormatVersion},
             {"classifier", describe_model(classifier_)},
             {"regressor", describe_model(regressor_)},
             {"features", std::move(features)},
             {"grade_scale", {classifier_.norm.target.min, classifier_.norm.target.max}},
             {"pass_threshold", classifier_.norm.pass_threshold},
             {"threshold", threshold_},
             {"metrics", metrics_}}};
}

ServiceResponse RiskService::health() const { return {200, {{"status", "ok"}}}; }

ServiceResponse RiskService::handle(const std::string& method, const std::string& path, const std::string& body,
                                    const std::string& authorization) {
    if (path == "/api/health" && method == "GET") return health();
    if (!authorized(authorization)) return error_response(401, "Unauthorized", "missing or invalid bearer token");
    try {
        if (path == "/api/roster" && method == "GET") return roster();
        if (path == "/api/threshold" && method == "GET") return threshold();
        if (path == "/api/threshold" && method == "PUT") return set_threshold(body);
        if (path == "/api/predict" && method == "POST") return predict(body);
        if (path == "/api/model" && method == "GET") return model();
    } catch (const Error& e) {
        return error_response(400, std::string(to_string(e.code())), e.what());
    }
    if (path == "/api/roster" || path == "/api/threshold" || path == "/api/predict" || path == "/api/model" ||
        path == "/api/health")
        return error_response(405, "MethodNotAllowed", method + " not allowed on " + path);
    return error_response(404, "NotFound", "no such endpoint: " + path);
}

}  // namespace gradecast
