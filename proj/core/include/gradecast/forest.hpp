#pragma once

#include <vector>

#include "gradecast/tree.hpp"

namespace gradecast {

struct ForestModel {
    Task task = Task::Classification;
    std::size_t n_features = 0;
    std::vector<TreeModel> trees;
    bool bootstrap = true;
    MaxFeatures max_features{};
    std::uint64_t seed = 0;

    /// Mean of the trees' positive-class probabilities, or of their outputs.
    double predict_one(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Mean of per-tree normalized importances, renormalized to sum to 1.
    std::vector<double> feature_importances() const;
    friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

/// Tree i draws from its own SplitMix64 stream seeded with cfg.seed + i: first
/// the bootstrap sample (n draws with replacement) when enabled, then the
/// per-split feature subsets.
ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelConfig& cfg);

}  // namespace gradecast
