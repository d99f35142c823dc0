#include "gradecast/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "gradecast/error.hpp"
#include "gradecast/preprocess.hpp"
#include "gradecast/random.hpp"

namespace gradecast {

ClsMetrics classification_metrics(std::span<const int> y_true, std::span<const int> y_pred, int positive) {
    if (y_true.size() != y_pred.size() || y_true.empty())
        throw Error(ErrorCode::LengthMismatch, "classification metrics need equal, non-empty label vectors");
    ClsMetrics m;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1))
            throw Error(ErrorCode::NonBinaryLabels, "labels must be 0 or 1");
        const bool actual = y_true[i] == positive;
        const bool predicted = y_pred[i] == positive;
        if (actual && predicted) ++m.tp;
        else if (!actual && predicted) ++m.fp;
        else if (!actual && !predicted) ++m.tn;
        else ++m.fn;
    }
    const auto ratio = [&m](std::size_t num, std::size_t den) {
        if (den == 0) {
            m.degenerate = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(y_true.size());
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.f1 = 0.0;
        m.degenerate = true;
    }
    return m;
}

RegMetrics regression_metrics(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.size() != y_pred.size() || y_true.size() < 2)
        throw Error(ErrorCode::LengthMismatch, "regression metrics need equal vectors of length >= 2");
    const auto n = static_cast<double>(y_true.size());
    double mean = 0.0;
    for (double v : y_true) mean += v;
    mean /= n;
    double abs_sum = 0.0, ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double e = y_true[i] - y_pred[i];
        abs_sum += std::abs(e);
        ss_res += e * e;
        ss_tot += (y_true[i] - mean) * (y_true[i] - mean);
    }
    RegMetrics m;
    m.mae = abs_sum / n;
    m.mse = ss_res / n;
    m.rmse = std::sqrt(m.mse);
    if (ss_tot > 0.0) {
        m.r2 = 1.0 - ss_res / ss_tot;
    } else if (ss_res == 0.0) {
        m.r2 = 1.0;
    } else {
        m.r2 = 0.0;
        m.degenerate = true;
    }
    return m;
}

MetricBundle to_bundle(const ClsMetrics& m) {
    return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

MetricBundle to_bundle(const RegMetrics& m) {
    return {{"mae", m.mae}, {"mse", m.mse}, {"rmse", m.rmse}, {"r2", m.r2}};
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n)
        throw Error(ErrorCode::BadK, "k-fold needs 2 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    const auto idx = shuffled_indices(n, seed);
    std::vector<std::vector<std::size_t>> folds(k);
    const std::size_t base = n / k, extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(pos), idx.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return folds;
}

double primary_metric(Task task, const Eigen::VectorXd& y_true, const Predictions& predicted) {
    if (task == Task::Classification) {
        std::vector<int> truth(static_cast<std::size_t>(y_true.size()));
        for (Eigen::Index i = 0; i < y_true.size(); ++i) truth[static_cast<std::size_t>(i)] = y_true(i) >= 0.5 ? 1 : 0;
        return classification_metrics(truth, predicted.labels).accuracy;
    }
    return regression_metrics(std::span<const double>(y_true.data(), static_cast<std::size_t>(y_true.size())),
                              std::span<const double>(predicted.values.data(), static_cast<std::size_t>(predicted.values.size())))
        .r2;
}

CvResult cross_validate(const ModelConfig& cfg, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const std::vector<std::vector<std::size_t>>& folds) {
    CvResult out;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        try {
            std::vector<std::size_t> train;
            for (std::size_t g = 0; g < folds.size(); ++g)
                if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
            std::sort(train.begin(), train.end());
            const auto model = fit_model(cfg, take_rows(X, train), take_rows(y, train));
            const auto held_X = take_rows(X, folds[f]);
            const auto held_y = take_rows(y, folds[f]);
            out.fold_scores.push_back(primary_metric(cfg.task, held_y, predict(model, held_X)));
        } catch (const Error& e) {
            throw e.with_context("fold " + std::to_string(f));
        }
    }
    double sum = 0.0;
    for (double s : out.fold_scores) sum += s;
    out.mean = out.fold_scores.empty() ? 0.0 : sum / static_cast<double>(out.fold_scores.size());
    return out;
}

CvResult cross_validate(const ModelConfig& cfg, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t k,
                        std::uint64_t seed) {
    return cross_validate(cfg, X, y, kfold_indices(static_cast<std::size_t>(X.rows()), k, seed));
}

double AggregateReport::mean_of(const std::string& metric) const {
    for (std::size_t i = 0; i < metric_names.size(); ++i)
        if (metric_names[i] == metric) return mean[i];
    throw Error(ErrorCode::InvalidArgument, "no metric named '" + metric + "'");
}

double AggregateReport::stddev_of(const std::string& metric) const {
    for (std::size_t i = 0; i < metric_names.size(); ++i)
        if (metric_names[i] == metric) return stddev[i];
    throw Error(ErrorCode::InvalidArgument, "no metric named '" + metric + "'");
}

AggregateReport aggregate(std::vector<MetricBundle> runs, std::vector<std::uint64_t> seeds) {
    if (runs.empty()) throw Error(ErrorCode::InvalidArgument, "aggregate needs at least one run");
    AggregateReport r;
    for (const auto& [name, value] : runs.front()) r.metric_names.push_back(name);
    const auto m = r.metric_names.size();
    for (const auto& run : runs) {
        if (run.size() != m) throw Error(ErrorCode::InvalidArgument, "runs report different metric sets");
        std::vector<double> values;
        for (std::size_t i = 0; i < m; ++i) {
            if (run[i].first != r.metric_names[i])
                throw Error(ErrorCode::InvalidArgument, "runs report different metric sets");
            values.push_back(run[i].second);
        }
        r.runs.push_back(std::move(values));
    }
    r.seeds = std::move(seeds);
    const auto n = static_cast<double>(r.runs.size());
    r.mean.assign(m, 0.0);
    r.stddev.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double sum = 0.0;
        for (const auto& run : r.runs) sum += run[i];
        r.mean[i] = sum / n;
        if (r.runs.size() > 1) {
            double ss = 0.0;
            for (const auto& run : r.runs) ss += (run[i] - r.mean[i]) * (run[i] - r.mean[i]);
            r.stddev[i] = std::sqrt(ss / (n - 1.0));
        }
    }
    return r;
}

AggregateReport repeat_runs(const std::function<MetricBundle(std::uint64_t)>& run, std::size_t repetitions,
                            std::uint64_t base_seed) {
    if (repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
    std::vector<MetricBundle> bundles;
    std::vector<std::uint64_t> seeds;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const std::uint64_t seed = base_seed + rep;
        try {
            bundles.push_back(run(seed));
        } catch (const Error& e) {
            throw e.with_context("repetition " + std::to_string(rep));
        }
        seeds.push_back(seed);
    }
    return aggregate(std::move(bundles), std::move(seeds));
}

nlohmann::json to_json(const ClsMetrics& m) {
    return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
            {"tp", m.tp},             {"fp", m.fp},               {"tn", m.tn},         {"fn", m.fn},
            {"degenerate", m.degenerate}};
}

nlohmann::json to_json(const RegMetrics& m) {
    return {{"mae", m.mae}, {"mse", m.mse}, {"rmse", m.rmse}, {"r2", m.r2}, {"degenerate", m.degenerate}};
}

nlohmann::json to_json(const AggregateReport& r) {
    nlohmann::json mean = nlohmann::json::object(), stddev = nlohmann::json::object();
    for (std::size_t i = 0; i < r.metric_names.size(); ++i) {
        mean[r.metric_names[i]] = r.mean[i];
        stddev[r.metric_names[i]] = r.stddev[i];
    }
    return {{"metrics", r.metric_names}, {"runs", r.runs}, {"seeds", r.seeds}, {"mean", mean}, {"stddev", stddev}};
}

}  // namespace gradecast
