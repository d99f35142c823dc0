#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "gradecast/schema.hpp"

namespace gradecast {

struct Missing {
    friend bool operator==(Missing, Missing) noexcept { return true; }
};

/// One parsed cell: Missing, a finite number (Numeric columns) or the trimmed
/// raw token (Categorical columns).
using Cell = std::variant<Missing, double, std::string>;

inline bool is_missing(const Cell& c) noexcept { return std::holds_alternative<Missing>(c); }

struct RawTable {
    FeatureSchema schema;
    std::vector<std::vector<Cell>> rows;  // one cell per schema column, schema order
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row

    std::size_t row_count() const noexcept { return rows.size(); }
    friend bool operator==(const RawTable&, const RawTable&) = default;
};

enum class DropReason { MissingTarget, RangeViolation, DisallowedValue };
std::string_view to_string(DropReason reason) noexcept;

struct DropEntry {
    std::size_t row = 0;   // index into the input table
    std::size_t line = 0;  // source line, 0 when unknown
    DropReason reason = DropReason::MissingTarget;
    std::string column;
};

struct DropReport {
    std::size_t rows_in = 0;
    std::size_t rows_dropped = 0;
    std::vector<DropEntry> reasons;
};

/// Splits one delimited line; double-quoted fields may contain the delimiter
/// and `""` escapes. Surrounding whitespace is kept.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

/// Parses a delimited UTF-8 file with a header row. Columns are matched to the
/// schema by (trimmed) name, so file column order does not matter.
RawTable load_table(const std::filesystem::path& path, const FeatureSchema& schema, char delimiter = ';');
RawTable parse_table(std::string_view text, const FeatureSchema& schema, char delimiter = ';');

struct ValidationOptions {
    bool strict_cap = true;
    double max_drop_fraction = 0.05;
};

struct ValidatedTable {
    RawTable table;
    DropReport report;
};

/// Drops rows with a Missing target or any present value outside its
/// column's valid_range / allowed_values. Missing predictors are kept for
/// imputation. Throws DropCapExceeded when strict_cap is on and more than
/// max_drop_fraction of the rows would go.
ValidatedTable validate_rows(const RawTable& table, const ValidationOptions& options = {});

std::size_t count_missing_predictors(const RawTable& table);

}  // namespace gradecast
