#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradecast/model.hpp"
#include "gradecast/preprocess.hpp"

namespace gradecast {

struct RiskConfig {
    double threshold = 0.70;  // flag when p_fail is strictly above
    std::size_t top_k = 3;
};

void validate_risk_config(const RiskConfig& cfg);

struct Contribution {
    std::string feature;
    double value = 0.0;
    friend bool operator==(const Contribution&, const Contribution&) = default;
};

struct RiskScore {
    std::string student_id;
    double p_fail = 0.0;
    bool flagged = false;
    double predicted_grade = 0.0;  // grade units, clamped to the grade scale
    std::vector<Contribution> contributions;
    friend bool operator==(const RiskScore&, const RiskScore&) = default;
};

inline bool exceeds_threshold(double p_fail, double threshold) noexcept { return p_fail > threshold; }

/// Linear / logistic: signed w_j * x_j (toward the model score).
/// Tree / forest: impurity-based importances, which do not depend on x.
/// Returns the top k by |value|, ties by feature index.
std::vector<Contribution> top_contributions(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                                            std::size_t k);

double denormalize_grade(double v, const NormParams& norm) noexcept;

/// p_fail = 1 - P(pass) from `classifier`; predicted grade from `regressor`,
/// denormalized and clamped; contributions from the classifier. Throws
/// ModelPairMismatch when the two models were fitted on different features.
RiskScore score_student(const Eigen::Ref<const Eigen::VectorXd>& x, const TrainedModel& classifier,
                        const TrainedModel& regressor, const NormParams& norm, const RiskConfig& cfg,
                        std::string student_id = {});

/// Scores every row of X and sorts by descending p_fail (stable).
std::vector<RiskScore> score_roster(const Eigen::MatrixXd& X, const std::vector<std::string>& ids,
                                    const TrainedModel& classifier, const TrainedModel& regressor, const NormParams& norm,
                                    const RiskConfig& cfg);

/// Re-derives every flag for a new threshold.
void apply_threshold(std::vector<RiskScore>& roster, double threshold);
void sort_roster(std::vector<RiskScore>& roster);

nlohmann::json to_json(const RiskScore& s);
RiskScore risk_score_from_json(const nlohmann::json& j);
nlohmann::json roster_to_json(const std::vector<RiskScore>& roster);
std::vector<RiskScore> roster_from_json(const nlohmann::json& j);

}  // namespace gradecast
