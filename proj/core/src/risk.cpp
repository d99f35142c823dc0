#include "gradecast/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gradecast/error.hpp"

namespace gradecast {

void validate_risk_config(const RiskConfig& cfg) {
    if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
        throw Error(ErrorCode::InvalidConfig, "risk threshold must lie strictly between 0 and 1");
}

std::vector<Contribution> top_contributions(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                                            std::size_t k) {
    const auto p = model.n_features();
    if (static_cast<std::size_t>(x.size()) != p)
        throw Error(ErrorCode::FeatureCountMismatch, "contributions expect " + std::to_string(p) + " features");
    std::vector<double> values(p, 0.0);
    if (const auto* lin = std::get_if<LinearModel>(&model.parameters)) {
        for (std::size_t j = 0; j < p; ++j) values[j] = lin->weights(static_cast<Eigen::Index>(j)) * x(static_cast<Eigen::Index>(j));
    } else if (const auto* log = std::get_if<LogisticModel>(&model.parameters)) {
        for (std::size_t j = 0; j < p; ++j) values[j] = log->weights(static_cast<Eigen::Index>(j)) * x(static_cast<Eigen::Index>(j));
    } else if (const auto* tree = std::get_if<TreeModel>(&model.parameters)) {
        values = tree->feature_importances();
    } else if (const auto* forest = std::get_if<ForestModel>(&model.parameters)) {
        values = forest->feature_importances();
    } else {
        throw Error(ErrorCode::UnsupportedModel, "no attribution rule for this model family");
    }

    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
    std::vector<Contribution> out;
    for (std::size_t i = 0; i < std::min(k, p); ++i) out.push_back({model.feature_names[order[i]], values[order[i]]});
    return out;
}

double denormalize_grade(double v, const NormParams& norm) noexcept { return norm.denormalize_grade(v); }

RiskScore score_student(const Eigen::Ref<const Eigen::VectorXd>& x, const TrainedModel& classifier,
                        const TrainedModel& regressor, const NormParams& norm, const RiskConfig& cfg,
                        std::string student_id) {
    if (classifier.task() != Task::Classification || regressor.task() != Task::Regression)
        throw Error(ErrorCode::ModelPairMismatch, "risk scoring needs a classifier and a regressor");
    if (classifier.feature_names != regressor.feature_names)
        throw Error(ErrorCode::ModelPairMismatch, "classifier and regressor were trained on different feature sets");
    if (static_cast<std::size_t>(x.size()) != classifier.n_features())
        throw Error(ErrorCode::FeatureCountMismatch, "expected " + std::to_string(classifier.n_features()) +
                                                         " features, got " + std::to_string(x.size()));
    RiskScore s;
    s.student_id = std::move(student_id);
    s.p_fail = std::clamp(1.0 - predict_one(classifier, x), 0.0, 1.0);
    s.flagged = exceeds_threshold(s.p_fail, cfg.threshold);
    s.predicted_grade = denormalize_grade(predict_one(regressor, x), norm);
    s.contributions = top_contributions(classifier, x, cfg.top_k);
    return s;
}

void sort_roster(std::vector<RiskScore>& roster) {
    std::stable_sort(roster.begin(), roster.end(), [](const RiskScore& a, const RiskScore& b) { return a.p_fail > b.p_fail; });
}

std::vector<RiskScore> score_roster(const Eigen::MatrixXd& X, const std::vector<std::string>& ids,
                                    const TrainedModel& classifier, const TrainedModel& regressor, const NormParams& norm,
                                    const RiskConfig& cfg) {
    if (ids.size() != static_cast<std::size_t>(X.rows()))
        throw Error(ErrorCode::LengthMismatch, "one student id per row is required");
    std::vector<RiskScore> roster;
    roster.reserve(ids.size());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        roster.push_back(score_student(X.row(i).transpose(), classifier, regressor, norm, cfg, ids[static_cast<std::size_t>(i)]));
    sort_roster(roster);
    return roster;
}

void apply_threshold(std::vector<RiskScore>& roster, double threshold) {
    for (auto& s : roster) s.flagged = exceeds_threshold(s.p_fail, threshold);
}

nlohmann::json to_json(const RiskScore& s) {
    nlohmann::json contributions = nlohmann::json::array();
    for (const auto& c : s.contributions) contributions.push_back({{"feature", c.feature}, {"value", c.value}});
    return {{"student_id", s.student_id},
            {"p_fail", s.p_fail},
            {"flagged", s.flagged},
            {"predicted_grade", s.predicted_grade},
            {"contributions", std::move(contributions)}};
}

RiskScore risk_score_from_json(const nlohmann::json& j) {
    RiskScore s;
    s.student_id = j.at("student_id").get<std::string>();
    s.p_fail = j.at("p_fail").get<double>();
    s.flagged = j.at("flagged").get<bool>();
    s.predicted_grade = j.at("predicted_grade").get<double>();
    for (const auto& c : j.at("contributions"))
        s.contributions.push_back({c.at("feature").get<std::string>(), c.at("value").get<double>()});
    return s;
}

nlohmann::json roster_to_json(const std::vector<RiskScore>& roster) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : roster) out.push_back(to_json(s));
    return out;
}

std::vector<RiskScore> roster_from_json(const nlohmann::json& j) {
    try {
        std::vector<RiskScore> out;
        for (const auto& s : j) out.push_back(risk_score_from_json(s));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed roster: ") + e.what());
    }
}

}  // namespace gradecast
