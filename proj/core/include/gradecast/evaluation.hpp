#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradecast/model.hpp"

namespace gradecast {

struct ClsMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    bool degenerate = false;  // some ratio had a zero denominator and was set to 0
};

struct RegMetrics {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    bool degenerate = false;  // constant y_true with nonzero residual; r2 set to 0
};

/// Binary labels (0/1). Precision, recall and F1 are taken for `positive`.
ClsMetrics classification_metrics(std::span<const int> y_true, std::span<const int> y_pred, int positive = 1);

/// r2 = 1 - SSres/SStot. Requires at least two observations.
RegMetrics regression_metrics(std::span<const double> y_true, std::span<const double> y_pred);

/// Ordered (name, value) pairs; the layout of one run's results.
using MetricBundle = std::vector<std::pair<std::string, double>>;
MetricBundle to_bundle(const ClsMetrics& m);
MetricBundle to_bundle(const RegMetrics& m);

/// Seeded shuffle of 0..n-1 cut into k contiguous folds; the first n mod k
/// folds get one extra row. Throws BadK unless 2 <= k <= n.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvResult {
    std::vector<double> fold_scores;
    double mean = 0.0;
};

/// Primary metric per task: accuracy (classification) or r2 (regression).
double primary_metric(Task task, const Eigen::VectorXd& y_true, const Predictions& predicted);

/// Train on all folds but one, score the held-out fold, for each fold.
/// Training errors are rethrown with the fold index prepended.
CvResult cross_validate(const ModelConfig& cfg, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const std::vector<std::vector<std::size_t>>& folds);
CvResult cross_validate(const ModelConfig& cfg, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t k,
                        std::uint64_t seed);

struct AggregateReport {
    std::vector<std::string> metric_names;
    std::vector<std::vector<double>> runs;  // runs[rep][metric]
    std::vector<std::uint64_t> seeds;
    std::vector<double> mean;
    std::vector<double> stddev;  // sample (n-1); 0 for a single run

    double mean_of(const std::string& metric) const;
    double stddev_of(const std::string& metric) const;
};

AggregateReport aggregate(std::vector<MetricBundle> runs, std::vector<std::uint64_t> seeds);

/// Calls run(seed) for seeds base_seed .. base_seed + repetitions - 1 and
/// aggregates. Errors are rethrown with the repetition index prepended.
AggregateReport repeat_runs(const std::function<MetricBundle(std::uint64_t)>& run, std::size_t repetitions,
                            std::uint64_t base_seed);

nlohmann::json to_json(const ClsMetrics& m);
nlohmann::json to_json(const RegMetrics& m);
nlohmann::json to_json(const AggregateReport& r);

}  // namespace gradecast
