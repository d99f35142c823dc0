#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "gradecast/error.hpp"
#include "gradecast/evaluation.hpp"
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

TEST_CASE("classification metrics: worked example") {
    const std::vector<int> t{1, 1, 1, 0, 0, 1, 0, 1};
    const std::vector<int> p{1, 0, 1, 0, 1, 1, 0, 1};
    const auto m = classification_metrics(t, p);
    CHECK(m.tp == 4);
    CHECK(m.fn == 1);
    CHECK(m.fp == 1);
    CHECK(m.tn == 2);
    CHECK(m.accuracy == 0.75);
    CHECK(m.precision == 0.8);
    CHECK(m.recall == 0.8);
    CHECK(m.f1 == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_FALSE(m.degenerate);
}

TEST_CASE("classification metrics: zero denominators are flagged") {
    const std::vector<int> t{0, 0, 0};
    const std::vector<int> p{0, 0, 0};
    const auto m = classification_metrics(t, p);
    CHECK(m.accuracy == 1.0);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.degenerate);
    CHECK(code_of([] { classification_metrics(std::vector<int>{1, 2}, std::vector<int>{1, 0}); }) ==
          ErrorCode::NonBinaryLabels);
    CHECK(code_of([] { classification_metrics(std::vector<int>{1}, std::vector<int>{1, 0}); }) ==
          ErrorCode::LengthMismatch);
}

TEST_CASE("classification metrics agree with the brute-force oracle") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng() % 60;
        const double bias = std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<int> t(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = std::uniform_real_distribution<double>(0, 1)(rng) < bias;
            p[i] = std::uniform_real_distribution<double>(0, 1)(rng) < 0.5 ? t[i] : 1 - t[i];
        }
        for (int positive : {1, 0}) {
            const auto m = classification_metrics(t, p, positive);
            const auto o = oracle::confusion(t, p, positive);
            CHECK(static_cast<long>(m.tp) == o.tp);
            CHECK(static_cast<long>(m.fp) == o.fp);
            CHECK(static_cast<long>(m.tn) == o.tn);
            CHECK(static_cast<long>(m.fn) == o.fn);
            CHECK(std::abs(m.accuracy - o.accuracy) <= 1e-12);
            CHECK(std::abs(m.precision - o.precision) <= 1e-12);
            CHECK(std::abs(m.recall - o.recall) <= 1e-12);
            CHECK(std::abs(m.f1 - o.f1) <= 1e-12);
        }
    }
}

TEST_CASE("regression metrics: worked example and degenerate target") {
    const std::vector<double> t{3, -0.5, 2, 7};
    const std::vector<double> p{2.5, 0.0, 2, 8};
    const auto m = regression_metrics(t, p);
    CHECK(m.mae == doctest::Approx(0.5));
    CHECK(m.mse == doctest::Approx(0.375));
    CHECK(m.rmse == doctest::Approx(std::sqrt(0.375)));
    CHECK(m.r2 == doctest::Approx(0.9486081370449679));

    const std::vector<double> flat{2, 2, 2};
    CHECK(regression_metrics(flat, flat).r2 == 1.0);
    const auto d = regression_metrics(flat, std::vector<double>{2, 2, 3});
    CHECK(d.r2 == 0.0);
    CHECK(d.degenerate);
    CHECK(code_of([] { regression_metrics(std::vector<double>{1}, std::vector<double>{1}); }) ==
          ErrorCode::LengthMismatch);
}

TEST_CASE("regression metrics agree with the oracle and satisfy rmse^2 = mse") {
    std::mt19937_64 rng(202);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<double> t(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = 10 + 4 * n01(rng);
            p[i] = t[i] + n01(rng);
        }
        const auto m = regression_metrics(t, p);
        const auto o = oracle::regression(t, p);
        CHECK(std::abs(m.mae - o.mae) <= 1e-12);
        CHECK(std::abs(m.mse - o.mse) <= 1e-12);
        CHECK(std::abs(m.rmse - o.rmse) <= 1e-12);
        CHECK(std::abs(m.r2 - o.r2) <= 1e-12);
        CHECK(std::abs(m.rmse * m.rmse - m.mse) <= 1e-12 * std::max(1.0, m.mse));
        CHECK(m.r2 <= 1.0);
    }
}

TEST_CASE("kfold_indices partitions the rows") {
    for (std::size_t n : {5u, 17u, 100u}) {
        for (std::size_t k : {2u, 3u, 5u}) {
            if (k > n) continue;
            const auto folds = kfold_indices(n, k, 9);
            REQUIRE(folds.size() == k);
            std::set<std::size_t> seen;
            std::size_t total = 0;
            for (std::size_t f = 0; f < k; ++f) {
                CHECK(folds[f].size() == n / k + (f < n % k ? 1 : 0));
                total += folds[f].size();
                seen.insert(folds[f].begin(), folds[f].end());
            }
            CHECK(total == n);
            CHECK(seen.size() == n);
            CHECK(kfold_indices(n, k, 9) == folds);
        }
    }
    CHECK(code_of([] { kfold_indices(10, 1, 0); }) == ErrorCode::BadK);
    CHECK(code_of([] { kfold_indices(3, 4, 0); }) == ErrorCode::BadK);
}

TEST_CASE("cross_validate scores each held-out fold") {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd X = fixtures::random_matrix(rng, 60, 2);
    Eigen::VectorXd y = 3.0 * X.col(0) - X.col(1);
    const auto cfg = default_config(Family::Linear, Task::Regression);
    const auto cv = cross_validate(cfg, X, y, 5, 1);
    REQUIRE(cv.fold_scores.size() == 5);
    for (double s : cv.fold_scores) CHECK(s == doctest::Approx(1.0));
    CHECK(cv.mean == doctest::Approx(1.0));
}

TEST_CASE("cross_validate reports the failing fold") {
    Eigen::MatrixXd X(6, 1);
    X << 0, 1, 2, 3, 4, 5;
    Eigen::VectorXd y(6);
    y << 0, 0, 0, 0, 0, 1;
    const auto cfg = default_config(Family::Logistic, Task::Classification);
    try {
        cross_validate(cfg, X, y, std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4, 5}});
        FAIL("expected SingleClassTraining");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingleClassTraining);
        CHECK(std::string(e.what()).find("fold 1") != std::string::npos);
    }
}

TEST_CASE("aggregate computes mean and sample standard deviation") {
    const auto r = aggregate({{{"a", 1.0}, {"b", 10.0}}, {{"a", 2.0}, {"b", 10.0}}, {{"a", 3.0}, {"b", 10.0}}},
                             {5, 6, 7});
    CHECK(r.mean_of("a") == 2.0);
    CHECK(r.stddev_of("a") == 1.0);
    CHECK(r.stddev_of("b") == 0.0);
    CHECK(r.seeds == std::vector<std::uint64_t>{5, 6, 7});
    CHECK(aggregate({{{"a", 4.0}}}, {1}).stddev_of("a") == 0.0);
    CHECK(code_of([&] { r.mean_of("zzz"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { aggregate({{{"a", 1.0}}, {{"b", 1.0}}}, {1, 2}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("repeat_runs feeds consecutive seeds and prefixes errors") {
    const auto r = repeat_runs([](std::uint64_t s) { return MetricBundle{{"seed", static_cast<double>(s)}}; }, 4, 10);
    CHECK(r.seeds == std::vector<std::uint64_t>{10, 11, 12, 13});
    CHECK(r.mean_of("seed") == 11.5);
    try {
        repeat_runs(
            [](std::uint64_t s) -> MetricBundle {
                if (s == 12) throw Error(ErrorCode::EmptyNode, "boom");
                return {{"x", 1.0}};
            },
            4, 10);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyNode);
        CHECK(std::string(e.what()).find("repetition 2") != std::string::npos);
    }
}
