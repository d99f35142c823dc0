#include "gradecast/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gradecast/error.hpp"

namespace gradecast {
namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

Cell parse_cell(std::string_view token, ColumnKind kind) {
    token = trim(token);
    if (token.empty()) return Missing{};
    if (kind == ColumnKind::Categorical) return std::string(token);
    double value = 0.0;
    if (token.front() == '+') token.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) return Missing{};
    return value;
}

}  // namespace

std::string_view to_string(DropReason reason) noexcept {
    switch (reason) {
        case DropReason::MissingTarget: return "MissingTarget";
        case DropReason::RangeViolation: return "RangeViolation";
        case DropReason::DisallowedValue: return "DisallowedValue";
    }
    return "Unknown";
}

std::vector<std::string> split_delimited(std::string_view line, char delimiter) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(std::move(field));
    return out;
}

RawTable parse_table(std::string_view text, const FeatureSchema& schema, char delimiter) {
    validate_schema(schema);
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos <= text.size();) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw Error(ErrorCode::HeaderMismatch, "file is empty; expected a header row");

    // file column -> schema column
    const auto header = split_delimited(lines.front(), delimiter);
    std::vector<std::size_t> file_to_schema(header.size());
    std::set<std::string> seen;
    std::vector<std::string> extra;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name(trim(header[i]));
        const auto idx = schema.find(name);
        if (!idx || !seen.insert(name).second) {
            extra.push_back(name);
            continue;
        }
        file_to_schema[i] = *idx;
    }
    std::vector<std::string> missing;
    for (const auto& c : schema.columns)
        if (!seen.contains(c.name)) missing.push_back(c.name);
    if (!missing.empty() || !extra.empty()) {
        std::ostringstream msg;
        msg << "header does not match schema;";
        if (!missing.empty()) {
            msg << " missing columns:";
            for (const auto& m : missing) msg << " '" << m << "'";
            msg << ";";
        }
        if (!extra.empty()) {
            msg << " extra columns:";
            for (const auto& e : extra) msg << " '" << e << "'";
        }
        throw Error(ErrorCode::HeaderMismatch, msg.str());
    }

    RawTable table;
    table.schema = schema;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        auto cells = split_delimited(lines[li], delimiter);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::RowArity, "line " + std::to_string(li + 1) + ": expected " +
                                                 std::to_string(header.size()) + " cells, found " +
                                                 std::to_string(cells.size()));
        }
        std::vector<Cell> row(schema.columns.size(), Missing{});
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto col = file_to_schema[i];
            row[col] = parse_cell(cells[i], schema.columns[col].kind);
        }
        table.rows.push_back(std::move(row));
        table.line_numbers.push_back(li + 1);
    }
    return table;
}

RawTable load_table(const std::filesystem::path& path, const FeatureSchema& schema, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::FileUnreadable, "read error on " + path.string());
    return parse_table(buf.str(), schema, delimiter);
}

ValidatedTable validate_rows(const RawTable& table, const ValidationOptions& options) {
    const auto& schema = table.schema;
    const auto target = schema.target_index();

    std::vector<std::set<std::string>> allowed(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c)
        if (schema.columns[c].allowed_values)
            allowed[c] = {schema.columns[c].allowed_values->begin(), schema.columns[c].allowed_values->end()};

    ValidatedTable out;
    out.table.schema = schema;
    out.report.rows_in = table.rows.size();

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = r < table.line_numbers.size() ? table.line_numbers[r] : 0;
        std::optional<DropEntry> drop;
        if (is_missing(row[target])) drop = DropEntry{r, line, DropReason::MissingTarget, schema.columns[target].name};
        for (std::size_t c = 0; c < row.size() && !drop; ++c) {
            const auto& spec = schema.columns[c];
            if (spec.role == ColumnRole::Ignored || is_missing(row[c])) continue;
            if (spec.valid_range) {
                const double v = std::get<double>(row[c]);
                if (!spec.valid_range->contains(v)) drop = DropEntry{r, line, DropReason::RangeViolation, spec.name};
            } else if (spec.allowed_values && !allowed[c].contains(std::get<std::string>(row[c]))) {
                drop = DropEntry{r, line, DropReason::DisallowedValue, spec.name};
            }
        }
        if (drop) {
            out.report.reasons.push_back(std::move(*drop));
        } else {
            out.table.rows.push_back(row);
            if (r < table.line_numbers.size()) out.table.line_numbers.push_back(table.line_numbers[r]);
        }
    }
    out.report.rows_dropped = out.report.reasons.size();

    if (options.strict_cap && out.report.rows_in > 0) {
        const double fraction = static_cast<double>(out.report.rows_dropped) / static_cast<double>(out.report.rows_in);
        if (fraction > options.max_drop_fraction) {
            std::ostringstream msg;
            msg << out.report.rows_dropped << " of " << out.report.rows_in << " rows failed validation ("
                << fraction * 100.0 << "% > " << options.max_drop_fraction * 100.0 << "% cap)";
            throw Error(ErrorCode::DropCapExceeded, msg.str());
        }
    }
    return out;
}

std::size_t count_missing_predictors(const RawTable& table) {
    const auto preds = table.schema.predictor_indices();
    std::size_t n = 0;
    for (const auto& row : table.rows)
        for (auto c : preds) n += is_missing(row[c]) ? 1 : 0;
    return n;
}

}  // namespace gradecast
