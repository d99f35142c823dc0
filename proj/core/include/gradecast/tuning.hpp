#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradecast/evaluation.hpp"

namespace gradecast {

struct ParamGrid {
    Family family = Family::Linear;
    Task task = Task::Regression;
    /// Axis name -> candidate values, in declaration order.
    std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
};

/// The shipped search spaces (they all contain the library defaults).
ParamGrid default_grid(Family family, Task task);

/// Cartesian product in declaration order, last axis varying fastest. An
/// empty axis list yields the default configuration alone. Throws UnknownAxis.
std::vector<ModelConfig> expand_grid(const ParamGrid& grid, std::uint64_t seed = 0);

struct TuneEntry {
    ModelConfig config;
    std::vector<double> fold_scores;
    double mean = 0.0;  // -inf when training failed
    std::string error;
    bool is_default = false;
    bool in_grid = true;
};

struct TuneResult {
    ModelConfig best_config;
    double best_cv_score = 0.0;
    double default_score = 0.0;
    std::vector<TuneEntry> table;  // grid order; the default is appended when outside the grid
};

/// Scores every expanded configuration by k-fold CV on one shared set of folds
/// (seeded by `seed`, which also seeds the models). Best = highest mean, ties
/// to the earlier entry. A failing configuration scores -inf and stays in the
/// table with its error message.
TuneResult grid_search(const ParamGrid& grid, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t k,
                       std::uint64_t seed);

nlohmann::json grid_to_json(const ParamGrid& grid);
/// `axes` is an object (declaration order preserved by ordered_json) mapping
/// axis names to value arrays.
ParamGrid grid_from_json(Family family, Task task, const nlohmann::ordered_json& axes);
nlohmann::json to_json(const TuneResult& r);

}  // namespace gradecast
