#pragma once

#include <Eigen/Core>

#include "gradecast/model_config.hpp"

namespace gradecast {

struct LinearModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;

    double score(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights.dot(x) + intercept; }
};

/// Ordinary least squares in closed form. The centered system is solved by a
/// complete orthogonal decomposition, which yields the minimum-norm solution
/// when X is rank deficient. No sign constraint on the weights.
/// Throws DegenerateDesign for zero rows or zero columns.
LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp);

}  // namespace gradecast
