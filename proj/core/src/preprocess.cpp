#include "gradecast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "gradecast/error.hpp"
#include "gradecast/random.hpp"

namespace gradecast {
namespace {

std::vector<std::string> vocabulary(const RawTable& table, std::size_t col) {
    std::set<std::string> values;
    for (const auto& row : table.rows)
        if (const auto* s = std::get_if<std::string>(&row[col])) values.insert(*s);
    return {values.begin(), values.end()};
}

double code_of(const std::vector<std::string>& categories, const std::string& value) {
    const auto it = std::lower_bound(categories.begin(), categories.end(), value);
    if (it == categories.end() || *it != value) return -1.0;
    return static_cast<double>(it - categories.begin());
}

/// Observed values of one column as numbers (codes for categoricals).
std::vector<double> observed_numeric(const RawTable& table, std::size_t col,
                                     const std::vector<std::string>& categories) {
    std::vector<double> out;
    for (const auto& row : table.rows) {
        if (const auto* d = std::get_if<double>(&row[col])) out.push_back(*d);
        else if (const auto* s = std::get_if<std::string>(&row[col])) out.push_back(code_of(categories, *s));
    }
    return out;
}

double population_variance(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size());
}

std::string format_number(double v) {
    if (std::floor(v) == v && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Cell> fit_imputer(const RawTable& table) {
    const auto& schema = table.schema;
    std::vector<Cell> fill(schema.columns.size(), Missing{});
    for (auto c : schema.predictor_indices()) {
        if (schema.columns[c].kind == ColumnKind::Numeric) {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& row : table.rows)
                if (const auto* d = std::get_if<double>(&row[c])) {
                    sum += *d;
                    ++n;
                }
            if (n > 0) fill[c] = sum / static_cast<double>(n);
        } else {
            std::map<std::string, std::size_t> counts;  // ordered: first max wins ties
            for (const auto& row : table.rows)
                if (const auto* s = std::get_if<std::string>(&row[c])) ++counts[*s];
            std::size_t best = 0;
            for (const auto& [value, count] : counts)
                if (count > best) {
                    best = count;
                    fill[c] = value;
                }
        }
    }
    return fill;
}

RawTable apply_imputer(const RawTable& table, const std::vector<Cell>& fill) {
    RawTable out = table;
    const auto preds = table.schema.predictor_indices();
    for (auto& row : out.rows)
        for (auto c : preds)
            if (is_missing(row[c])) {
                if (c >= fill.size() || is_missing(fill[c]))
                    throw Error(ErrorCode::AllMissingColumn,
                                "predictor '" + table.schema.columns[c].name + "' has no observed values to impute from");
                row[c] = fill[c];
            }
    return out;
}

RawTable impute(const RawTable& table) { return apply_imputer(table, fit_imputer(table)); }

// ---------------------------------------------------------------------------

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw Error(ErrorCode::LengthMismatch, "pearson needs two vectors of equal length >= 2 (got " +
                                                   std::to_string(xs.size()) + " and " + std::to_string(ys.size()) + ")");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

void validate_selection_config(const SelectionConfig& cfg) {
    if (!(cfg.correlation_cutoff > 0.0 && cfg.correlation_cutoff <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "correlation_cutoff must lie in (0, 1]");
    if (!(cfg.max_missing_fraction >= 0.0 && cfg.max_missing_fraction < 1.0))
        throw Error(ErrorCode::InvalidConfig, "max_missing_fraction must lie in [0, 1)");
    if (!(cfg.min_variance >= 0.0)) throw Error(ErrorCode::InvalidConfig, "min_variance must be >= 0");
}

SelectionResult select_features(const RawTable& table, const SelectionConfig& cfg) {
    validate_selection_config(cfg);
    const auto& schema = table.schema;
    const auto preds = schema.predictor_indices();
    if (preds.empty()) throw Error(ErrorCode::EmptySelection, "schema declares no predictors");

    SelectionReport report;
    const auto rows = table.rows.size();

    // Stage 1: relevance filtering.
    std::vector<std::size_t> alive;
    std::vector<std::vector<std::string>> vocab(schema.columns.size());
    for (auto c : preds) {
        const auto& spec = schema.columns[c];
        if (spec.kind == ColumnKind::Categorical) vocab[c] = vocabulary(table, c);
        const auto observed = observed_numeric(table, c, vocab[c]);
        const double missing_fraction =
            rows == 0 ? 0.0 : static_cast<double>(rows - observed.size()) / static_cast<double>(rows);
        if (missing_fraction > cfg.max_missing_fraction) {
            report.dropped_high_missing.push_back(spec.name);
        } else if (population_variance(observed) <= cfg.min_variance) {
            report.dropped_low_variance.push_back(spec.name);
        } else {
            alive.push_back(c);
        }
    }

    // Stage 2: correlation filter on imputed, encoded columns.
    if (alive.size() > 1) {
        const auto fill = fit_imputer(table);
        std::vector<std::vector<double>> encoded;
        for (auto c : alive) {
            std::vector<double> col(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                const Cell& cell = is_missing(table.rows[r][c]) ? fill[c] : table.rows[r][c];
                if (const auto* d = std::get_if<double>(&cell)) col[r] = *d;
                else col[r] = code_of(vocab[c], std::get<std::string>(cell));
            }
            encoded.push_back(std::move(col));
        }
        const auto m = alive.size();
        std::vector<std::vector<double>> corr(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) corr[i][j] = corr[j][i] = pearson(encoded[i], encoded[j]);

        std::vector<bool> live(m, true);
        const auto mean_abs = [&](std::size_t a) {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t o = 0; o < m; ++o)
                if (live[o] && o != a) {
                    sum += std::abs(corr[a][o]);
                    ++n;
                }
            return n == 0 ? 0.0 : sum / static_cast<double>(n);
        };
        for (;;) {
            std::size_t bi = m, bj = m;
            double best = cfg.correlation_cutoff;
            for (std::size_t i = 0; i < m; ++i) {
                if (!live[i]) continue;
                for (std::size_t j = i + 1; j < m; ++j)
                    if (live[j] && std::abs(corr[i][j]) > best) {
                        best = std::abs(corr[i][j]);
                        bi = i;
                        bj = j;
                    }
            }
            if (bi == m) break;
            const double mi = mean_abs(bi);
            const double mj = mean_abs(bj);
            const auto drop = mi > mj ? bi : bj;
            const auto keep = drop == bi ? bj : bi;
            live[drop] = false;
            report.dropped_correlated.push_back(
                {schema.columns[alive[drop]].name, schema.columns[alive[keep]].name, corr[bi][bj]});
        }
        std::vector<std::size_t> survivors;
        for (std::size_t i = 0; i < m; ++i)
            if (live[i]) survivors.push_back(alive[i]);
        alive = std::move(survivors);
    }

    // Stage 3: domain review.
    if (cfg.keep_list) {
        std::set<std::string> keep(cfg.keep_list->begin(), cfg.keep_list->end());
        for (const auto& name : keep) {
            const auto idx = schema.find(name);
            if (!idx || schema.columns[*idx].role != ColumnRole::Predictor)
                throw Error(ErrorCode::InvalidConfig, "keep_list names '" + name + "', which is not a predictor column");
        }
        std::vector<std::size_t> reviewed;
        for (auto c : alive) {
            if (keep.contains(schema.columns[c].name)) reviewed.push_back(c);
            else report.dropped_by_review.push_back(schema.columns[c].name);
        }
        alive = std::move(reviewed);
    }

    if (alive.empty()) throw Error(ErrorCode::EmptySelection, "feature selection eliminated every predictor");

    SelectionResult out{table, std::move(report)};
    std::set<std::size_t> kept(alive.begin(), alive.end());
    for (auto c : preds) {
        if (kept.contains(c)) out.report.kept.push_back(schema.columns[c].name);
        else out.table.schema.columns[c].role = ColumnRole::Ignored;
    }
    return out;
}

// ---------------------------------------------------------------------------

double FeatureScaling::transform(const Cell& raw) const {
    double v = 0.0;
    if (const auto* d = std::get_if<double>(&raw)) {
        v = *d;
    } else if (const auto* s = std::get_if<std::string>(&raw)) {
        v = code_of(categories, *s);
        if (v < 0.0) throw Error(ErrorCode::UnseenCategory, "column '" + name + "': unseen category '" + *s + "'");
    } else {
        throw Error(ErrorCode::InvalidArgument, "column '" + name + "': missing value");
    }
    if (max == min) return 0.0;
    return std::clamp((v - min) / (max - min), 0.0, 1.0);
}

double NormParams::normalize_grade(double grade) const noexcept {
    return (grade - target.min) / (target.max - target.min);
}

double NormParams::denormalize_grade(double v) const noexcept {
    return std::clamp(target.min + v * (target.max - target.min), target.min, target.max);
}

std::vector<std::string> NormParams::feature_names() const {
    std::vector<std::string> out;
    for (const auto& f : features) out.push_back(f.name);
    return out;
}

DataMatrix encode_and_normalize(const RawTable& table, std::span<const std::size_t> fit_rows,
                                const std::vector<Cell>& fill) {
    const auto& schema = table.schema;
    const auto preds = schema.predictor_indices();
    const auto target = schema.target_index();
    const auto n = table.rows.size();
    if (fit_rows.empty()) throw Error(ErrorCode::InvalidArgument, "encode_and_normalize needs at least one fit row");
    for (auto r : fit_rows)
        if (r >= n) throw Error(ErrorCode::InvalidArgument, "fit row index out of range");

    DataMatrix dm;
    dm.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(preds.size()));
    dm.norm.target = schema.grade_scale;
    dm.norm.pass_threshold = schema.pass_threshold;

    for (std::size_t j = 0; j < preds.size(); ++j) {
        const auto c = preds[j];
        const auto& spec = schema.columns[c];
        FeatureScaling fs;
        fs.name = spec.name;
        fs.kind = spec.kind;
        fs.valid_range = spec.valid_range;
        if (c < fill.size()) fs.fill = fill[c];
        if (spec.kind == ColumnKind::Categorical) fs.categories = vocabulary(table, c);

        std::vector<double> raw(n);
        for (std::size_t r = 0; r < n; ++r) {
            const auto& cell = table.rows[r][c];
            if (const auto* d = std::get_if<double>(&cell)) raw[r] = *d;
            else if (const auto* s = std::get_if<std::string>(&cell)) raw[r] = code_of(fs.categories, *s);
            else throw Error(ErrorCode::InvalidArgument, "column '" + spec.name + "' still has missing values; impute first");
        }
        fs.min = fs.max = raw[fit_rows.front()];
        for (auto r : fit_rows) {
            fs.min = std::min(fs.min, raw[r]);
            fs.max = std::max(fs.max, raw[r]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            const double scaled = fs.max == fs.min ? 0.0 : std::clamp((raw[r] - fs.min) / (fs.max - fs.min), 0.0, 1.0);
            dm.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = scaled;
        }
        dm.feature_names.push_back(spec.name);
        dm.norm.features.push_back(std::move(fs));
    }

    dm.y_grade.resize(static_cast<Eigen::Index>(n));
    dm.y_pass.resize(static_cast<Eigen::Index>(n));
    const auto id_col = schema.identifier_index();
    for (std::size_t r = 0; r < n; ++r) {
        const auto* g = std::get_if<double>(&table.rows[r][target]);
        if (!g) throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(r) + " has no target value");
        const auto i = static_cast<Eigen::Index>(r);
        dm.y_grade(i) = std::clamp(dm.norm.normalize_grade(*g), 0.0, 1.0);
        dm.y_pass(i) = *g >= schema.pass_threshold ? 1.0 : 0.0;

        std::string id;
        if (id_col) {
            const auto& cell = table.rows[r][*id_col];
            if (const auto* s = std::get_if<std::string>(&cell)) id = *s;
            else if (const auto* d = std::get_if<double>(&cell)) id = format_number(*d);
        }
        if (id.empty()) {
            const auto line = r < table.line_numbers.size() ? table.line_numbers[r] : r + 2;
            id = "row-" + std::to_string(line);
        }
        dm.row_ids.push_back(std::move(id));
    }
    return dm;
}

Eigen::VectorXd transform_features(const NormParams& norm, const std::vector<Cell>& raw) {
    if (raw.size() != norm.features.size())
        throw Error(ErrorCode::FeatureCountMismatch, "expected " + std::to_string(norm.features.size()) +
                                                         " feature values, got " + std::to_string(raw.size()));
    Eigen::VectorXd x(static_cast<Eigen::Index>(raw.size()));
    for (std::size_t j = 0; j < raw.size(); ++j) {
        const auto& f = norm.features[j];
        x(static_cast<Eigen::Index>(j)) = f.transform(is_missing(raw[j]) ? f.fill : raw[j]);
    }
    return x;
}

std::vector<int> derive_labels(std::span<const double> grades, double pass_threshold) {
    std::vector<int> out;
    out.reserve(grades.size());
    for (double g : grades) out.push_back(g >= pass_threshold ? 1 : 0);
    return out;
}

// ---------------------------------------------------------------------------

Split split_rows(std::size_t n, std::uint64_t seed) {
    if (n < 10) throw Error(ErrorCode::TooFewRows, "split needs at least 10 rows, got " + std::to_string(n));
    const auto idx = shuffled_indices(n, seed);
    const std::size_t n_train = n * 8 / 10;
    const std::size_t n_val = n / 10;
    Split s;
    s.seed = seed;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                        idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
    return s;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, std::span<const std::size_t> idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(idx[i]));
    return out;
}

Eigen::VectorXd take_rows(const Eigen::VectorXd& y, std::span<const std::size_t> idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(idx[i]));
    return out;
}

}  // namespace gradecast
