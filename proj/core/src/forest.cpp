#include "gradecast/forest.hpp"

#include <numeric>

#include "gradecast/error.hpp"

namespace gradecast {

double ForestModel::predict_one(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    double sum = 0.0;
    for (const auto& t : trees) sum += t.predict_one(x);
    return sum / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::feature_importances() const {
    std::vector<double> imp(n_features, 0.0);
    for (const auto& t : trees) {
        const auto ti = t.feature_importances();
        for (std::size_t j = 0; j < imp.size(); ++j) imp[j] += ti[j];
    }
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total > 0.0)
        for (auto& v : imp) v /= total;
    return imp;
}

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelConfig& cfg) {
    if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorCode::DegenerateDesign, "forest fit on an empty design matrix");
    ForestModel forest;
    forest.task = cfg.task;
    forest.n_features = static_cast<std::size_t>(X.cols());
    forest.bootstrap = cfg.hp.bootstrap;
    forest.max_features = cfg.hp.max_features;
    forest.seed = cfg.seed;

    const auto n = static_cast<std::size_t>(X.rows());
    const auto presorted = SortedColumns::build(X);
    std::vector<double> weights;
    forest.trees.reserve(static_cast<std::size_t>(cfg.hp.n_estimators));
    for (int i = 0; i < cfg.hp.n_estimators; ++i) {
        SplitMix64 rng(cfg.seed + static_cast<std::uint64_t>(i));
        TreeFitOptions options;
        options.presorted = &presorted;
        options.rng = &rng;
        if (cfg.hp.bootstrap) {
            weights.assign(n, 0.0);
            for (std::size_t d = 0; d < n; ++d) weights[static_cast<std::size_t>(rng.below(n))] += 1.0;
            options.row_weights = weights;
        }
        forest.trees.push_back(fit_tree(X, y, cfg.task, cfg.hp, options));
    }
    return forest;
}

}  // namespace gradecast
