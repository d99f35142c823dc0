#include "gradecast/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gradecast/error.hpp"

namespace gradecast {

ParamGrid default_grid(Family family, Task task) {
    using nlohmann::json;
    ParamGrid g{family, task, {}};
    switch (family) {
        case Family::Logistic:
            g.axes = {{"C", {0.01, 0.1, 1.0, 10.0}}, {"max_iter", {100, 500}}};
            break;
        case Family::Tree:
            g.axes = {{"max_depth", {3, 5, 10, nullptr}}, {"min_samples_split", {2, 5, 10}}, {"min_samples_leaf", {1, 2, 5}}};
            break;
        case Family::Forest:
            g.axes = {{"n_estimators", {50, 100, 200}}, {"max_depth", {5, 10, nullptr}}, {"min_samples_split", {2, 5}}};
            break;
        case Family::Linear:
            g.axes = {{"fit_intercept", {true, false}}};
            break;
    }
    return g;
}

std::vector<ModelConfig> expand_grid(const ParamGrid& grid, std::uint64_t seed) {
    auto base = default_config(grid.family, grid.task);
    base.seed = seed;
    const auto names = canonical_hyperparameters(grid.family);
    for (const auto& [name, values] : grid.axes) {
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw Error(ErrorCode::UnknownAxis, "grid axis '" + name + "' is not a hyperparameter of the " +
                                                    std::string(to_string(grid.family)) + " family");
        if (values.empty()) throw Error(ErrorCode::InvalidConfig, "grid axis '" + name + "' has no values");
    }

    std::vector<ModelConfig> out;
    std::vector<std::size_t> odometer(grid.axes.size(), 0);
    for (;;) {
        auto cfg = base;
        for (std::size_t a = 0; a < grid.axes.size(); ++a)
            set_hyperparameter(cfg, grid.axes[a].first, grid.axes[a].second[odometer[a]]);
        validate_config(cfg);
        out.push_back(std::move(cfg));

        std::size_t a = grid.axes.size();
        while (a > 0) {
            --a;
            if (++odometer[a] < grid.axes[a].second.size()) break;
            odometer[a] = 0;
            if (a == 0) return out;
        }
        if (grid.axes.empty()) return out;
    }
}

TuneResult grid_search(const ParamGrid& grid, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t k,
                       std::uint64_t seed) {
    const auto folds = kfold_indices(static_cast<std::size_t>(X.rows()), k, seed);
    auto configs = expand_grid(grid, seed);
    auto default_cfg = default_config(grid.family, grid.task);
    default_cfg.seed = seed;

    TuneResult result;
    bool default_seen = false;
    for (auto& cfg : configs) {
        TuneEntry entry;
        entry.is_default = cfg == default_cfg;
        default_seen = default_seen || entry.is_default;
        entry.config = std::move(cfg);
        result.table.push_back(std::move(entry));
    }
    if (!default_seen) {
        TuneEntry entry;
        entry.config = default_cfg;
        entry.is_default = true;
        entry.in_grid = false;
        result.table.push_back(std::move(entry));
    }

    for (auto& entry : result.table) {
        try {
            auto cv = cross_validate(entry.config, X, y, folds);
            entry.fold_scores = std::move(cv.fold_scores);
            entry.mean = cv.mean;
        } catch (const Error& e) {
            entry.mean = -std::numeric_limits<double>::infinity();
            entry.error = std::string(to_string(e.code())) + ": " + e.what();
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.table.size(); ++i)
        if (result.table[i].mean > result.table[best].mean) best = i;
    result.best_config = result.table[best].config;
    result.best_cv_score = result.table[best].mean;
    for (const auto& entry : result.table)
        if (entry.is_default) result.default_score = entry.mean;
    return result;
}

nlohmann::json grid_to_json(const ParamGrid& grid) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& [name, values] : grid.axes) axes.push_back({{"name", name}, {"values", values}});
    return {{"family", to_string(grid.family)}, {"task", to_string(grid.task)}, {"axes", axes}};
}

ParamGrid grid_from_json(Family family, Task task, const nlohmann::ordered_json& axes) {
    ParamGrid g{family, task, {}};
    if (!axes.is_object()) throw Error(ErrorCode::InvalidConfig, "grid must be an object of axis -> values");
    for (const auto& [name, values] : axes.items()) {
        if (!values.is_array()) throw Error(ErrorCode::InvalidConfig, "grid axis '" + name + "' must be an array");
        std::vector<nlohmann::json> vs;
        for (const auto& v : values) vs.push_back(nlohmann::json::parse(v.dump()));
        g.axes.emplace_back(name, std::move(vs));
    }
    return g;
}

nlohmann::json to_json(const TuneResult& r) {
    const auto score = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json table = nlohmann::json::array();
    for (const auto& e : r.table) {
        nlohmann::json row{{"hyperparameters", hyperparameters_to_json(e.config)},
                           {"fold_scores", e.fold_scores},
                           {"mean", score(e.mean)},
                           {"is_default", e.is_default},
                           {"in_grid", e.in_grid}};
        if (!e.error.empty()) row["error"] = e.error;
        table.push_back(std::move(row));
    }
    return {{"best_config", config_to_json(r.best_config)},
            {"best_cv_score", score(r.best_cv_score)},
            {"default_cv_score", score(r.default_score)},
            {"table", std::move(table)}};
}

}  // namespace gradecast
