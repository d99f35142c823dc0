#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gradecast {

enum class ColumnKind { Numeric, Categorical };
enum class ColumnRole { Predictor, Target, Identifier, Ignored };

struct Range {
    double min = 0.0;
    double max = 0.0;
    bool contains(double v) const noexcept { return v >= min && v <= max; }
    friend bool operator==(const Range&, const Range&) = default;
};

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    ColumnRole role = ColumnRole::Predictor;
    std::optional<Range> valid_range;                      // Numeric only
    std::optional<std::vector<std::string>> allowed_values;  // Categorical only
    friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

/// Declarative column contract between a raw delimited file and the numeric
/// pipeline. Construct through `make_schema` or `schema_from_json`, both of
/// which enforce the invariants below:
///  - names unique and non-empty
///  - exactly one Target column, and it is Numeric
///  - valid_range only on Numeric, allowed_values only on Categorical
///  - grade_scale.min < grade_scale.max, pass_threshold inside grade_scale
struct FeatureSchema {
    std::vector<ColumnSpec> columns;
    double pass_threshold = 10.0;
    Range grade_scale{0.0, 20.0};

    std::size_t target_index() const;
    std::optional<std::size_t> find(const std::string& name) const;
    std::optional<std::size_t> identifier_index() const;
    std::vector<std::size_t> predictor_indices() const;
    friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

/// Throws Error{InvalidSchema} when an invariant is broken.
void validate_schema(const FeatureSchema& schema);
FeatureSchema make_schema(std::vector<ColumnSpec> columns, double pass_threshold, Range grade_scale);

std::string_view to_string(ColumnKind kind) noexcept;
std::string_view to_string(ColumnRole role) noexcept;

nlohmann::json schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const nlohmann::json& doc);
FeatureSchema load_schema(const std::filesystem::path& path);

}  // namespace gradecast
