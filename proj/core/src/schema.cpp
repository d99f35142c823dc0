#include "gradecast/schema.hpp"

#include <fstream>
#include <set>

#include "gradecast/error.hpp"

namespace gradecast {
namespace {

Error schema_error(const std::string& msg) { return Error(ErrorCode::InvalidSchema, msg); }

ColumnKind parse_kind(const std::string& s) {
    if (s == "numeric") return ColumnKind::Numeric;
    if (s == "categorical") return ColumnKind::Categorical;
    throw schema_error("unknown column kind '" + s + "'");
}

ColumnRole parse_role(const std::string& s) {
    if (s == "predictor") return ColumnRole::Predictor;
    if (s == "target") return ColumnRole::Target;
    if (s == "identifier") return ColumnRole::Identifier;
    if (s == "ignored") return ColumnRole::Ignored;
    throw schema_error("unknown column role '" + s + "'");
}

}  // namespace

std::string_view to_string(ColumnKind kind) noexcept {
    return kind == ColumnKind::Numeric ? "numeric" : "categorical";
}

std::string_view to_string(ColumnRole role) noexcept {
    switch (role) {
        case ColumnRole::Predictor: return "predictor";
        case ColumnRole::Target: return "target";
        case ColumnRole::Identifier: return "identifier";
        case ColumnRole::Ignored: return "ignored";
    }
    return "ignored";
}

std::size_t FeatureSchema::target_index() const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].role == ColumnRole::Target) return i;
    throw schema_error("schema has no target column");
}

std::optional<std::size_t> FeatureSchema::find(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> FeatureSchema::identifier_index() const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].role == ColumnRole::Identifier) return i;
    return std::nullopt;
}

std::vector<std::size_t> FeatureSchema::predictor_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].role == ColumnRole::Predictor) out.push_back(i);
    return out;
}

void validate_schema(const FeatureSchema& schema) {
    std::set<std::string> names;
    std::size_t targets = 0;
    for (const auto& c : schema.columns) {
        if (c.name.empty()) throw schema_error("column with empty name");
        if (!names.insert(c.name).second) throw schema_error("duplicate column name '" + c.name + "'");
        if (c.role == ColumnRole::Target) {
            ++targets;
            if (c.kind != ColumnKind::Numeric) throw schema_error("target column '" + c.name + "' must be numeric");
        }
        if (c.valid_range && c.kind != ColumnKind::Numeric)
            throw schema_error("valid_range on non-numeric column '" + c.name + "'");
        if (c.allowed_values && c.kind != ColumnKind::Categorical)
            throw schema_error("allowed_values on non-categorical column '" + c.name + "'");
        if (c.valid_range && !(c.valid_range->min <= c.valid_range->max))
            throw schema_error("empty valid_range on column '" + c.name + "'");
    }
    if (targets != 1) throw schema_error("schema must have exactly one target column, found " + std::to_string(targets));
    if (!(schema.grade_scale.min < schema.grade_scale.max)) throw schema_error("grade_scale min must be below max");
    if (!schema.grade_scale.contains(schema.pass_threshold))
        throw schema_error("pass_threshold lies outside grade_scale");
}

FeatureSchema make_schema(std::vector<ColumnSpec> columns, double pass_threshold, Range grade_scale) {
    FeatureSchema s{std::move(columns), pass_threshold, grade_scale};
    validate_schema(s);
    return s;
}

nlohmann::json schema_to_json(const FeatureSchema& schema) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : schema.columns) {
        nlohmann::json col{{"name", c.name}, {"kind", to_string(c.kind)}, {"role", to_string(c.role)}};
        if (c.valid_range) col["valid_range"] = {c.valid_range->min, c.valid_range->max};
        if (c.allowed_values) col["allowed_values"] = *c.allowed_values;
        cols.push_back(std::move(col));
    }
    return {{"columns", std::move(cols)},
            {"pass_threshold", schema.pass_threshold},
            {"grade_scale", {schema.grade_scale.min, schema.grade_scale.max}}};
}

FeatureSchema schema_from_json(const nlohmann::json& doc) {
    try {
        FeatureSchema s;
        for (const auto& col : doc.at("columns")) {
            ColumnSpec c;
            c.name = col.at("name").get<std::string>();
            c.kind = parse_kind(col.value("kind", std::string("numeric")));
            c.role = parse_role(col.value("role", std::string("predictor")));
            if (col.contains("valid_range")) {
                const auto& r = col.at("valid_range");
                c.valid_range = Range{r.at(0).get<double>(), r.at(1).get<double>()};
            }
            if (col.contains("allowed_values")) {
                std::vector<std::string> values;
                for (const auto& v : col.at("allowed_values"))
                    values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
                c.allowed_values = std::move(values);
            }
            s.columns.push_back(std::move(c));
        }
        if (doc.contains("pass_threshold")) s.pass_threshold = doc.at("pass_threshold").get<double>();
        if (doc.contains("grade_scale")) {
            const auto& g = doc.at("grade_scale");
            s.grade_scale = Range{g.at(0).get<double>(), g.at(1).get<double>()};
        }
        validate_schema(s);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw schema_error(std::string("malformed schema document: ") + e.what());
    }
}

FeatureSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open schema file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw schema_error(path.string() + ": " + e.what());
    }
    return schema_from_json(doc);
}

}  // namespace gradecast
