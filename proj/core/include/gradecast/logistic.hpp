#pragma once

#include <functional>

#include <Eigen/Core>

#include "gradecast/model_config.hpp"

namespace gradecast {

struct LogisticModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;
    double C = 1.0;
    bool converged = false;
    int iterations = 0;

    double decision(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights.dot(x) + intercept; }
    /// P(pass | x), strictly inside (0, 1) for finite inputs.
    double probability(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

struct LogisticObjective {
    double loss = 0.0;
    Eigen::VectorXd gradient;  // p weight entries followed by the intercept entry
};

/// sum_i log(1 + exp(-s_i (w.x_i + b))) + ||w||^2 / (2C), s_i = 2 y_i - 1.
/// The intercept is not penalized. Throws NonBinaryLabels / InvalidArgument.
LogisticObjective logistic_objective(const Eigen::VectorXd& weights, double intercept, const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& y, double C);

/// Called after each accepted optimizer step with (iteration, loss).
using LogisticObserver = std::function<void(int, double)>;

/// Limited-memory BFGS with an Armijo backtracking line search, started from
/// zero. Stops when the gradient infinity norm drops to 1e-6 or after
/// hp.max_iter iterations; hitting the cap is reported via `converged`, not
/// thrown. Throws SingleClassTraining when y holds a single class.
LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
                           const LogisticObserver& observer = {});

inline constexpr double kLogisticGradientTolerance = 1e-6;

}  // namespace gradecast
