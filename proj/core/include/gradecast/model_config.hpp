#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace gradecast {

enum class Family { Linear, Logistic, Tree, Forest };
enum class Task { Classification, Regression };

std::string_view to_string(Family family) noexcept;
std::string_view to_string(Task task) noexcept;
Family parse_family(std::string_view s);
Task parse_task(std::string_view s);

/// Size of the random feature subset drawn at each split.
struct MaxFeatures {
    enum class Rule { Sqrt, All, Fraction };
    Rule rule = Rule::All;
    double fraction = 1.0;  // Fraction only, in (0, 1]

    /// Sqrt -> ceil(sqrt(p)); All -> p; Fraction -> max(1, floor(fraction * p)).
    std::size_t resolve(std::size_t p) const noexcept;
    friend bool operator==(const MaxFeatures&, const MaxFeatures&) = default;
};

/// Union of every family's knobs. Only the canonical subset for a family is
/// serialized or settable (see canonical_hyperparameters).
struct Hyperparameters {
    double C = 1.0;
    int max_iter = 100;
    bool fit_intercept = true;
    std::optional<int> max_depth;  // nullopt = unlimited
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    MaxFeatures max_features{};
    int n_estimators = 100;
    bool bootstrap = true;
    friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

struct ModelConfig {
    Family family = Family::Linear;
    Task task = Task::Regression;
    Hyperparameters hp{};
    std::uint64_t seed = 0;  // used by Forest, and by Tree when max_features < p
    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

std::span<const std::string_view> canonical_hyperparameters(Family family) noexcept;

/// Library defaults: logistic C=1, max_iter=100; trees unlimited depth,
/// min_samples_split=2, min_samples_leaf=1, all features; forests 100 trees
/// with bootstrap and sqrt (classification) / all (regression) features;
/// linear fit_intercept=true.
ModelConfig default_config(Family family, Task task);

/// Throws InvalidConfig for an illegal family/task pair or out-of-range value.
void validate_config(const ModelConfig& cfg);

/// Throws UnknownAxis when `name` is not canonical for the family, and
/// InvalidConfig when the value has the wrong type.
void set_hyperparameter(ModelConfig& cfg, std::string_view name, const nlohmann::json& value);
nlohmann::json get_hyperparameter(const ModelConfig& cfg, std::string_view name);

nlohmann::json hyperparameters_to_json(const ModelConfig& cfg);
nlohmann::json config_to_json(const ModelConfig& cfg);
ModelConfig config_from_json(const nlohmann::json& doc);

/// Stable identifier, e.g. "random_forest_classifier".
std::string model_key(Family family, Task task);
/// Human label, e.g. "Random Forest Classifier".
std::string model_label(Family family, Task task);
/// Rough parameter-count order used to prefer simpler champions.
int complexity_rank(Family family) noexcept;

}  // namespace gradecast
