#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "gradecast/forest.hpp"
#include "gradecast/linear.hpp"
#include "gradecast/logistic.hpp"
#include "gradecast/model_config.hpp"
#include "gradecast/tree.hpp"

namespace gradecast {

using ModelParameters = std::variant<LinearModel, LogisticModel, TreeModel, ForestModel>;

/// A fitted model of any family plus the configuration and feature names it
/// was trained with. Immutable after fit; safe to share across threads.
struct TrainedModel {
    ModelConfig config;
    ModelParameters parameters;
    std::vector<std::string> feature_names;

    Task task() const noexcept { return config.task; }
    std::size_t n_features() const noexcept { return feature_names.size(); }
};

struct Predictions {
    Eigen::VectorXd values;   // P(pass) for classification, normalized grade for regression
    std::vector<int> labels;  // classification only: values >= 0.5
};

inline constexpr double kClassificationCutoff = 0.5;

TrainedModel fit_model(const ModelConfig& cfg, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       std::vector<std::string> feature_names = {});

/// Throws FeatureCountMismatch when X has the wrong number of columns.
Predictions predict(const TrainedModel& model, const Eigen::MatrixXd& X);
double predict_one(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace gradecast
