#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gradecast/error.hpp"
#include "gradecast/linear.hpp"
#include "gradecast/logistic.hpp"
#include "oracles.hpp"

using namespace gradecast;

namespace {

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("linear regression recovers an exact plane") {
    std::mt19937_64 rng(1);
    const Eigen::MatrixXd X = fixtures::random_matrix(rng, 30, 3);
    Eigen::Vector3d w(2.0, -1.5, 0.25);
    const Eigen::VectorXd y = (X * w).array() + 4.0;
    const auto m = fit_linear(X, y, Hyperparameters{});
    CHECK((m.weights - w).norm() < 1e-10);
    CHECK(m.intercept == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("linear regression matches the normal equations") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 40; ++trial) {
        const int p = 1 + static_cast<int>(rng() % 5);
        const int n = p + 5 + static_cast<int>(rng() % 40);
        const Eigen::MatrixXd X = fixtures::random_matrix(rng, n, p);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y(i) = X.row(i).sum() + n01(rng);
        for (bool intercept : {true, false}) {
            Hyperparameters hp;
            hp.fit_intercept = intercept;
            const auto m = fit_linear(X, y, hp);
            const auto o = oracle::normal_equations(fixtures::to_rows(X), fixtures::to_vector(y), intercept);
            for (int j = 0; j < p; ++j) CHECK(std::abs(m.weights(j) - o[static_cast<std::size_t>(j)]) <= 1e-8);
            CHECK(std::abs(m.intercept - o[static_cast<std::size_t>(p)]) <= 1e-8);
        }
    }
}

TEST_CASE("linear regression on a rank-deficient design gives the minimum-norm fit") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 1, 2, 2, 3, 3, 4, 4;
    Eigen::VectorXd y(4);
    y << 2, 4, 6, 8;
    const auto m = fit_linear(X, y, Hyperparameters{});
    CHECK(m.weights(0) == doctest::Approx(m.weights(1)));
    for (int i = 0; i < 4; ++i) CHECK(m.score(X.row(i).transpose()) == doctest::Approx(y(i)));
    CHECK(code_of([] { fit_linear(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), Hyperparameters{}); }) ==
          ErrorCode::DegenerateDesign);
}

TEST_CASE("logistic gradient matches central differences") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 30; ++trial) {
        const int p = 1 + static_cast<int>(rng() % 4);
        const int n = 5 + static_cast<int>(rng() % 30);
        const Eigen::MatrixXd X = fixtures::random_matrix(rng, n, p, -1, 1);
        Eigen::VectorXd y(n), w(p);
        for (int i = 0; i < n; ++i) y(i) = (rng() % 2) ? 1.0 : 0.0;
        for (int j = 0; j < p; ++j) w(j) = n01(rng);
        const double b = n01(rng);
        const double C = std::pow(10.0, std::uniform_real_distribution<double>(-2, 1)(rng));
        const auto obj = logistic_objective(w, b, X, y, C);
        const auto rows = fixtures::to_rows(X);
        const auto yy = fixtures::to_vector(y);
        const auto ww = fixtures::to_vector(w);
        CHECK(obj.loss == doctest::Approx(oracle::logistic_loss(rows, yy, ww, b, C)).epsilon(1e-12));
        const auto fd = oracle::logistic_gradient_fd(rows, yy, ww, b, C);
        for (int j = 0; j <= p; ++j) {
            const double g = obj.gradient(j);
            const double rel = std::abs(g - fd[static_cast<std::size_t>(j)]) / std::max(1.0, std::abs(g));
            CHECK(rel <= 1e-5);
        }
    }
}

TEST_CASE("logistic regression converges and separates a clean problem") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd X = fixtures::random_matrix(rng, 200, 2);
    Eigen::VectorXd y(200);
    for (int i = 0; i < 200; ++i) y(i) = X(i, 0) + 0.5 * X(i, 1) > 0.75 ? 1.0 : 0.0;
    Hyperparameters hp;
    hp.C = 100.0;
    hp.max_iter = 500;
    std::vector<double> losses;
    const auto m = fit_logistic(X, y, hp, [&](int, double loss) { losses.push_back(loss); });
    CHECK(m.converged);
    int correct = 0;
    for (int i = 0; i < 200; ++i) correct += (m.probability(X.row(i).transpose()) >= 0.5) == (y(i) == 1.0);
    CHECK(correct >= 194);
    for (std::size_t i = 1; i < losses.size(); ++i) CHECK(losses[i] <= losses[i - 1] + 1e-12);

    const auto obj = logistic_objective(m.weights, m.intercept, X, y, hp.C);
    CHECK(obj.gradient.lpNorm<Eigen::Infinity>() <= kLogisticGradientTolerance);
}

TEST_CASE("logistic regression reports the iteration cap instead of throwing") {
    std::mt19937_64 rng(6);
    const Eigen::MatrixXd X = fixtures::random_matrix(rng, 100, 3);
    Eigen::VectorXd y(100);
    for (int i = 0; i < 100; ++i) y(i) = X(i, 0) > 0.5 ? 1.0 : 0.0;
    Hyperparameters hp;
    hp.C = 1e6;
    hp.max_iter = 2;
    const auto m = fit_logistic(X, y, hp);
    CHECK_FALSE(m.converged);
    CHECK(m.iterations == 2);
}

TEST_CASE("logistic regression input errors") {
    Eigen::MatrixXd X(3, 1);
    X << 0, 1, 2;
    Eigen::VectorXd same(3), bad(3);
    same << 1, 1, 1;
    bad << 0, 2, 1;
    CHECK(code_of([&] { fit_logistic(X, same, Hyperparameters{}); }) == ErrorCode::SingleClassTraining);
    CHECK(code_of([&] { fit_logistic(X, bad, Hyperparameters{}); }) == ErrorCode::NonBinaryLabels);
    CHECK(code_of([&] { logistic_objective(Eigen::VectorXd::Zero(1), 0, X, bad, 1.0); }) == ErrorCode::NonBinaryLabels);
}

TEST_CASE("probabilities stay strictly inside (0, 1)") {
    LogisticModel m;
    m.weights = Eigen::VectorXd::Constant(1, 1e4);
    const Eigen::VectorXd big = Eigen::VectorXd::Constant(1, 1.0), small = Eigen::VectorXd::Constant(1, -1.0);
    CHECK(m.probability(big) < 1.0);
    CHECK(m.probability(small) > 0.0);
}
