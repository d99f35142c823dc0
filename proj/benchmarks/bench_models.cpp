#include <map>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "gradecast/evaluation.hpp"
#include "gradecast/forest.hpp"
#include "gradecast/logistic.hpp"
#include "gradecast/tree.hpp"

using namespace gradecast;

namespace {

struct Data {
    Eigen::MatrixXd X;
    Eigen::VectorXd y_cls, y_reg;
};

// Sized like the reference table after selection: 14 features in [0,1].
const Data& data(int rows) {
    static std::map<int, Data> cache;
    auto it = cache.find(rows);
    if (it != cache.end()) return it->second;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Data d{Eigen::MatrixXd(rows, 14), Eigen::VectorXd(rows), Eigen::VectorXd(rows)};
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < 14; ++j) d.X(i, j) = u(rng);
        d.y_reg(i) = 0.6 * d.X(i, 0) + 0.3 * d.X(i, 3) * d.X(i, 5) + 0.1 * u(rng);
        d.y_cls(i) = d.y_reg(i) > 0.45 ? 1.0 : 0.0;
    }
    return cache.emplace(rows, std::move(d)).first->second;
}

void BM_TreeFit(benchmark::State& state) {
    const auto& d = data(static_cast<int>(state.range(0)));
    const auto cfg = default_config(Family::Tree, Task::Classification);
    for (auto _ : state) benchmark::DoNotOptimize(fit_tree(d.X, d.y_cls, cfg));
}
BENCHMARK(BM_TreeFit)->Arg(1000)->Arg(3539)->Unit(benchmark::kMillisecond);

void BM_ForestFit(benchmark::State& state) {
    const auto& d = data(3539);
    auto cfg = default_config(Family::Forest, Task::Regression);
    cfg.hp.n_estimators = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fit_forest(d.X, d.y_reg, cfg));
}
BENCHMARK(BM_ForestFit)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_LogisticFit(benchmark::State& state) {
    const auto& d = data(static_cast<int>(state.range(0)));
    Hyperparameters hp;
    for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(d.X, d.y_cls, hp));
}
BENCHMARK(BM_LogisticFit)->Arg(1000)->Arg(3539)->Unit(benchmark::kMillisecond);

void BM_ClassificationMetrics(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::vector<int> t(static_cast<std::size_t>(state.range(0))), p(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<int>(rng() % 2);
        p[i] = static_cast<int>(rng() % 2);
    }
    for (auto _ : state) benchmark::DoNotOptimize(classification_metrics(t, p));
}
BENCHMARK(BM_ClassificationMetrics)->Arg(443)->Arg(100000);

void BM_RegressionMetrics(benchmark::State& state) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    std::vector<double> t(static_cast<std::size_t>(state.range(0))), p(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = u(rng);
        p[i] = u(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(regression_metrics(t, p));
}
BENCHMARK(BM_RegressionMetrics)->Arg(443)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
