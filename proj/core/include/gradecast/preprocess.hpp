#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gradecast/ingest.hpp"

namespace gradecast {

// ---------------------------------------------------------------------------
// Imputation

/// Per-column fill values: column mean for Numeric predictors, column mode for
/// Categorical predictors (ties go to the lexicographically smaller value,
/// which is also the smaller label code). Non-predictor columns hold Missing.
std::vector<Cell> fit_imputer(const RawTable& table);
RawTable apply_imputer(const RawTable& table, const std::vector<Cell>& fill);

/// fit_imputer + apply_imputer. Throws AllMissingColumn when a predictor has
/// no observed value.
RawTable impute(const RawTable& table);

// ---------------------------------------------------------------------------
// Feature selection

/// Pearson product-moment correlation. Returns 0 when either input is
/// constant. Throws LengthMismatch for unequal or < 2 lengths.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct SelectionConfig {
    double max_missing_fraction = 0.30;
    double min_variance = 0.0;
    double correlation_cutoff = 0.85;
    std::optional<std::vector<std::string>> keep_list;
};

void validate_selection_config(const SelectionConfig& cfg);

struct CorrelatedDrop {
    std::string dropped;
    std::string kept;
    double r = 0.0;
};

struct SelectionReport {
    std::vector<std::string> dropped_high_missing;
    std::vector<std::string> dropped_low_variance;
    std::vector<CorrelatedDrop> dropped_correlated;
    std::vector<std::string> dropped_by_review;  // not on the keep list
    std::vector<std::string> kept;               // schema order
};

struct SelectionResult {
    RawTable table;  // dropped predictors re-labelled Ignored
    SelectionReport report;
};

/// Three stages, in order:
///  1. relevance: missing fraction (as given, i.e. before imputation) above
///     max_missing_fraction, or variance <= min_variance;
///  2. multicollinearity: while some pair has |r| > cutoff, take the pair with
///     the largest |r| and drop the member whose mean |r| against the other
///     survivors is larger (equal: the later column);
///  3. domain review: intersect with keep_list when present.
/// Correlations are computed on mean/mode-imputed, label-encoded columns.
SelectionResult select_features(const RawTable& table, const SelectionConfig& cfg);

// ---------------------------------------------------------------------------
// Encoding and normalization

struct FeatureScaling {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    double min = 0.0;  // over fit rows, in raw (numeric) or code (categorical) units
    double max = 0.0;
    std::vector<std::string> categories;  // sorted; the code of a value is its index
    std::optional<Range> valid_range;
    Cell fill;  // imputation value used when scoring new rows

    /// Raw cell -> [0,1]. Throws UnseenCategory for unknown categorical values.
    double transform(const Cell& raw) const;
    friend bool operator==(const FeatureScaling&, const FeatureScaling&) = default;
};

struct NormParams {
    std::vector<FeatureScaling> features;
    Range target{0.0, 20.0};
    double pass_threshold = 10.0;

    double normalize_grade(double grade) const noexcept;
    /// min + v (max - min), clamped to the grade scale.
    double denormalize_grade(double v) const noexcept;
    std::vector<std::string> feature_names() const;
    friend bool operator==(const NormParams&, const NormParams&) = default;
};

struct DataMatrix {
    Eigen::MatrixXd X;        // n x p, entries in [0,1]
    Eigen::VectorXd y_grade;  // normalized to [0,1] by the grade scale
    Eigen::VectorXd y_pass;   // 1 = pass, 0 = fail
    std::vector<std::string> feature_names;
    std::vector<std::string> row_ids;
    NormParams norm;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(X.rows()); }
    std::size_t features() const noexcept { return static_cast<std::size_t>(X.cols()); }
};

/// Label-encodes categorical predictors (lexicographic code order over the
/// table's vocabulary) and min-max scales every predictor with statistics
/// from `fit_rows` only. Rows outside fit_rows are clipped into [0,1]. A
/// column with max == min maps to 0. The target is scaled by the schema's
/// grade_scale. `fill` (optional) is recorded for scoring-time imputation.
DataMatrix encode_and_normalize(const RawTable& table, std::span<const std::size_t> fit_rows,
                                const std::vector<Cell>& fill = {});

/// Raw predictor cells (in norm.features order) -> normalized feature vector.
/// Missing cells take the recorded fill value.
Eigen::VectorXd transform_features(const NormParams& norm, const std::vector<Cell>& raw);

/// 1 iff grade >= pass_threshold.
std::vector<int> derive_labels(std::span<const double> grades, double pass_threshold);

// ---------------------------------------------------------------------------
// Train / validation / test split

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
    friend bool operator==(const Split&, const Split&) = default;
};

/// Seeded shuffle of 0..n-1; floor(0.8n) train, floor(0.1n) validation, the
/// remainder test. Throws TooFewRows for n < 10.
Split split_rows(std::size_t n, std::uint64_t seed);

/// Rows `idx` of a matrix / vector.
Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, std::span<const std::size_t> idx);
Eigen::VectorXd take_rows(const Eigen::VectorXd& y, std::span<const std::size_t> idx);

}  // namespace gradecast
