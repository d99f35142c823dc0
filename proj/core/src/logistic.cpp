#include "gradecast/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "gradecast/error.hpp"

namespace gradecast {
namespace {

// log(1 + exp(t)) without overflow.
double log1p_exp(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

void check_labels(const Eigen::VectorXd& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 0.0 && y(i) != 1.0)
            throw Error(ErrorCode::NonBinaryLabels, "label " + std::to_string(y(i)) + " at row " + std::to_string(i) +
                                                        " is not 0 or 1");
}

/// Objective over theta = [w; b]; b is pinned to 0 when fit_intercept is off.
struct Problem {
    const Eigen::MatrixXd& X;
    const Eigen::VectorXd& y;
    double C;
    bool fit_intercept;

    double eval(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
        const auto p = X.cols();
        auto obj = logistic_objective(theta.head(p), theta(p), X, y, C);
        grad = std::move(obj.gradient);
        if (!fit_intercept) grad(p) = 0.0;
        return obj.loss;
    }
};

}  // namespace

double LogisticModel::probability(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    // Clamp away from exactly 0/1 so p_fail = 1 - p stays meaningful.
    constexpr double eps = 1e-15;
    return std::clamp(sigmoid(decision(x)), eps, 1.0 - eps);
}

LogisticObjective logistic_objective(const Eigen::VectorXd& weights, double intercept, const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& y, double C) {
    if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "design rows and label count differ");
    if (X.cols() != weights.size()) throw Error(ErrorCode::FeatureCountMismatch, "weight length differs from feature count");
    if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be positive");
    check_labels(y);

    const Eigen::VectorXd z = (X * weights).array() + intercept;
    Eigen::VectorXd dz(z.size());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double s = 2.0 * y(i) - 1.0;
        loss += log1p_exp(-s * z(i));
        dz(i) = -s * sigmoid(-s * z(i));
    }
    loss += weights.squaredNorm() / (2.0 * C);

    LogisticObjective out;
    out.loss = loss;
    out.gradient.resize(weights.size() + 1);
    out.gradient.head(weights.size()) = X.transpose() * dz + weights / C;
    out.gradient(weights.size()) = dz.sum();
    return out;
}

LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp,
                           const LogisticObserver& observer) {
    if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorCode::DegenerateDesign, "logistic fit on an empty design matrix");
    if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "design rows and label count differ");
    check_labels(y);
    const double positives = y.sum();
    if (positives == 0.0 || positives == static_cast<double>(y.size()))
        throw Error(ErrorCode::SingleClassTraining, "logistic regression needs both classes in the training labels");

    constexpr int kMemory = 10;
    constexpr double kArmijo = 1e-4;
    constexpr int kMaxBacktracks = 60;

    const Problem problem{X, y, hp.C, hp.fit_intercept};
    const auto dim = X.cols() + 1;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd grad;
    double loss = problem.eval(theta, grad);

    std::deque<Eigen::VectorXd> s_hist, y_hist;
    std::deque<double> rho_hist;

    LogisticModel model;
    model.C = hp.C;
    int iter = 0;
    while (iter < hp.max_iter && grad.lpNorm<Eigen::Infinity>() > kLogisticGradientTolerance) {
        // Two-loop recursion for d = -H grad.
        Eigen::VectorXd q = grad;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t k = s_hist.size(); k-- > 0;) {
            alpha[k] = rho_hist[k] * s_hist[k].dot(q);
            q -= alpha[k] * y_hist[k];
        }
        if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
        for (std::size_t k = 0; k < s_hist.size(); ++k) {
            const double beta = rho_hist[k] * y_hist[k].dot(q);
            q += (alpha[k] - beta) * s_hist[k];
        }
        Eigen::VectorXd dir = -q;
        double slope = grad.dot(dir);
        if (!(slope < 0.0)) {
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            dir = -grad;
            slope = -grad.squaredNorm();
        }

        double step = s_hist.empty() ? std::min(1.0, 1.0 / grad.lpNorm<Eigen::Infinity>()) : 1.0;
        Eigen::VectorXd next, next_grad;
        double next_loss = loss;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            next = theta + step * dir;
            next_loss = problem.eval(next, next_grad);
            if (std::isfinite(next_loss) && next_loss <= loss + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no descent possible at machine precision

        Eigen::VectorXd s = next - theta;
        Eigen::VectorXd yv = next_grad - grad;
        const double sy = s.dot(yv);
        if (sy > 1e-12 * yv.squaredNorm()) {
            if (static_cast<int>(s_hist.size()) == kMemory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
        }
        theta = std::move(next);
        grad = std::move(next_grad);
        loss = next_loss;
        ++iter;
        if (observer) observer(iter, loss);
    }

    model.weights = theta.head(X.cols());
    model.intercept = theta(X.cols());
    model.iterations = iter;
    model.converged = grad.lpNorm<Eigen::Infinity>() <= kLogisticGradientTolerance;
    return model;
}

}  // namespace gradecast
