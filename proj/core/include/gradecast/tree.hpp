#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gradecast/model_config.hpp"
#include "gradecast/random.hpp"

namespace gradecast {

/// One node of a binary CART tree. Leaves have feature == -1. Every node keeps
/// its prediction `value` (class-frequency vector {P(0), P(1)} for
/// classification, {mean} for regression), its training weight and impurity.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;  // go left iff x[feature] <= threshold
    int left = -1;
    int right = -1;
    double weight = 0.0;  // training rows reaching the node (bootstrap copies counted)
    double impurity = 0.0;
    std::vector<double> value;

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeModel {
    Task task = Task::Classification;
    std::size_t n_features = 0;
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    const TreeNode& leaf_for(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Positive-class probability (classification) or mean (regression).
    double predict_one(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    int depth() const;
    /// Total weighted impurity decrease per feature, normalized to sum to 1
    /// (all zeros when the tree never split).
    std::vector<double> feature_importances() const;
    friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

/// Gini (classification, labels 0/1) or variance (regression) of a node.
/// Throws EmptyNode on an empty input.
double impurity(std::span<const double> values, Task task);

/// Per-feature row order by (value, row index); reusable across the trees of
/// one forest.
struct SortedColumns {
    std::vector<std::vector<std::uint32_t>> order;
    static SortedColumns build(const Eigen::MatrixXd& X);
};

struct TreeFitOptions {
    std::span<const double> row_weights{};  // empty = every row once; 0 = row excluded
    const SortedColumns* presorted = nullptr;
    SplitMix64* rng = nullptr;  // feature subsampling; required when max_features < p
};

/// Greedy CART. At each node every midpoint between consecutive distinct
/// values of every candidate feature is scored by weighted child impurity;
/// the largest decrease wins, ties going to the lower feature index and then
/// the lower threshold. A node becomes a leaf when it is pure, at max_depth,
/// holds fewer than min_samples_split rows, or admits no split leaving
/// min_samples_leaf rows on both sides.
TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Task task, const Hyperparameters& hp,
                   const TreeFitOptions& options = {});

/// Convenience wrapper seeding the feature sampler from cfg.seed.
TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelConfig& cfg);

}  // namespace gradecast
