#include "gradecast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gradecast/schema.hpp"

namespace gradecast {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<ModelSlot>& model_slots() {
    static const std::vector<ModelSlot> slots{
        {Family::Logistic, Task::Classification}, {Family::Forest, Task::Classification},
        {Family::Tree, Task::Classification},     {Family::Linear, Task::Regression},
        {Family::Forest, Task::Regression},       {Family::Tree, Task::Regression},
    };
    return slots;
}

namespace {

Error config_error(const std::string& what) { return Error(ErrorCode::InvalidConfig, "pipeline config: " + what); }

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

template <class T>
T get_or(const ordered_json& obj, const char* key, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error(std::string("'") + key + "' has the wrong type");
    }
}

}  // namespace

PipelineConfig pipeline_config_from_json(const ordered_json& doc, const fs::path& base_dir) {
    if (!doc.is_object()) throw config_error("document must be an object");
    PipelineConfig cfg;

    if (!doc.contains("dataset") || !doc["dataset"].is_object()) throw config_error("missing 'dataset' object");
    const auto& ds = doc["dataset"];
    const auto path = get_or<std::string>(ds, "path", "");
    if (path.empty()) throw config_error("'dataset.path' is required");
    cfg.dataset_path = resolve(base_dir, path);
    const auto delim = get_or<std::string>(ds, "delimiter", ";");
    if (delim.size() != 1) throw config_error("'dataset.delimiter' must be a single character");
    cfg.delimiter = delim[0];

    const auto schema = get_or<std::string>(doc, "schema", "");
    if (schema.empty()) throw config_error("'schema' is required");
    cfg.schema_path = resolve(base_dir, schema);

    cfg.strict_cap = get_or<bool>(doc, "strict_cap", true);
    cfg.seed = get_or<std::uint64_t>(doc, "seed", 42);
    const auto reps = get_or<std::int64_t>(doc, "repetitions", 10);
    if (reps < 1) throw config_error("'repetitions' must be >= 1");
    cfg.repetitions = static_cast<std::size_t>(reps);
    const auto folds = get_or<std::int64_t>(doc, "cv_folds", 5);
    if (folds < 2) throw config_error("'cv_folds' must be >= 2");
    cfg.cv_folds = static_cast<std::size_t>(folds);

    if (doc.contains("selection")) {
        const auto& s = doc["selection"];
        if (!s.is_object()) throw config_error("'selection' must be an object");
        cfg.selection.max_missing_fraction = get_or<double>(s, "max_missing_fraction", 0.30);
        cfg.selection.min_variance = get_or<double>(s, "min_variance", 0.0);
        cfg.selection.correlation_cutoff = get_or<double>(s, "correlation_cutoff", 0.85);
        if (s.contains("keep_list") && !s["keep_list"].is_null())
            cfg.selection.keep_list = get_or<std::vector<std::string>>(s, "keep_list", {});
    }
    validate_selection_config(cfg.selection);

    if (doc.contains("risk")) {
        const auto& r = doc["risk"];
        if (!r.is_object()) throw config_error("'risk' must be an object");
        cfg.risk.threshold = get_or<double>(r, "threshold", 0.70);
        const auto k = get_or<std::int64_t>(r, "top_k", 3);
        if (k < 0) throw config_error("'risk.top_k' must be >= 0");
        cfg.risk.top_k = static_cast<std::size_t>(k);
    }
    validate_risk_config(cfg.risk);

    const ordered_json grids = doc.contains("grids") ? doc["grids"] : ordered_json::object();
    if (!grids.is_object()) throw config_error("'grids' must be an object");
    for (const auto& [key, value] : grids.items()) {
        const auto& slots = model_slots();
        if (std::none_of(slots.begin(), slots.end(), [&](const ModelSlot& s) { return s.key() == key; }))
            throw config_error("unknown model '" + key + "' in 'grids'");
        if (!value.is_object()) throw config_error("grid '" + key + "' must be an object");
    }
    for (const auto& slot : model_slots()) {
        const auto key = slot.key();
        cfg.grids[key] = grids.contains(key) ? grid_from_json(slot.family, slot.task, grids[key])
                                             : default_grid(slot.family, slot.task);
        expand_grid(cfg.grids[key]);  // surfaces UnknownAxis / InvalidConfig now
    }

    cfg.output_dir = resolve(base_dir, get_or<std::string>(doc, "output_dir", "out"));
    return cfg;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open config " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const json::exception& e) {
        throw config_error(e.what());
    }
    return pipeline_config_from_json(doc, path.parent_path());
}

json to_json(const PipelineConfig& cfg) {
    json grids = json::object();
    for (const auto& [key, grid] : cfg.grids) grids[key] = grid_to_json(grid);
    json selection{{"max_missing_fraction", cfg.selection.max_missing_fraction},
                   {"min_variance", cfg.selection.min_variance},
                   {"correlation_cutoff", cfg.selection.correlation_cutoff},
                   {"keep_list", cfg.selection.keep_list ? json(*cfg.selection.keep_list) : json(nullptr)}};
    return {{"dataset", {{"path", cfg.dataset_path.filename().string()}, {"delimiter", std::string(1, cfg.delimiter)}}},
            {"strict_cap", cfg.strict_cap},
            {"seed", cfg.seed},
            {"repetitions", cfg.repetitions},
            {"cv_folds", cfg.cv_folds},
            {"selection", std::move(selection)},
            {"grids", std::move(grids)},
            {"risk", {{"threshold", cfg.risk.threshold}, {"top_k", cfg.risk.top_k}}}};
}

// ---------------------------------------------------------------------------

PreparedTable prepare_table(const PipelineConfig& cfg) {
    PreparedTable out;
    RawTable raw = run_stage("ingest", [&] {
        out.schema = load_schema(cfg.schema_path);
        return load_table(cfg.dataset_path, out.schema, cfg.delimiter);
    });
    auto validated = run_stage("validate", [&] {
        return validate_rows(raw, ValidationOptions{.strict_cap = cfg.strict_cap, .max_drop_fraction = 0.05});
    });
    out.drops = std::move(validated.report);
    auto selected = run_stage("select", [&] { return select_features(validated.table, cfg.selection); });
    out.selection = std::move(selected.report);
    run_stage("impute", [&] {
        out.missing_before_imputation = count_missing_predictors(selected.table);
        out.fill = fit_imputer(selected.table);
        out.table = apply_imputer(selected.table, out.fill);
        out.missing_after_imputation = count_missing_predictors(out.table);
        if (out.missing_after_imputation != 0)
            throw Error(ErrorCode::AllMissingColumn, "missing values remain after imputation");
        return 0;
    });
    return out;
}

json preprocess_summary(const PreparedTable& p) {
    json reasons = json::object();
    json drops = json::array();
    for (const auto& d : p.drops.reasons) {
        const std::string r(to_string(d.reason));
        reasons[r] = reasons.value(r, 0) + 1;
        drops.push_back({{"line", d.line}, {"reason", r}, {"column", d.column}});
    }
    json correlated = json::array();
    for (const auto& c : p.selection.dropped_correlated)
        correlated.push_back({{"dropped", c.dropped}, {"kept", c.kept}, {"r", c.r}});
    return {{"rows_loaded", p.drops.rows_in},
            {"rows_dropped", p.drops.rows_dropped},
            {"rows_kept", p.table.row_count()},
            {"drop_counts", std::move(reasons)},
            {"drops", std::move(drops)},
            {"missing_before_imputation", p.missing_before_imputation},
            {"missing_after_imputation", p.missing_after_imputation},
            {"missing_check_passed", p.missing_after_imputation == 0},
            {"selection",
             {{"dropped_high_missing", p.selection.dropped_high_missing},
              {"dropped_low_variance", p.selection.dropped_low_variance},
              {"dropped_correlated", std::move(correlated)},
              {"dropped_by_review", p.selection.dropped_by_review},
              {"kept", p.selection.kept}}}};
}

PreparedSplit prepare_split(const PreparedTable& prepared, std::uint64_t seed) {
    return run_stage("normalize", [&] {
        PreparedSplit ps;
        ps.split = split_rows(prepared.table.row_count(), seed);
        ps.data = encode_and_normalize(prepared.table, ps.split.train, prepared.fill);
        return ps;
    });
}

// ---------------------------------------------------------------------------

const Eigen::VectorXd& target_for(const DataMatrix& data, Task task) {
    return task == Task::Classification ? data.y_pass : data.y_grade;
}

std::map<std::string, TuneResult> tune_models(const PipelineConfig& cfg, const PreparedSplit& ps) {
    return run_stage("tune", [&] {
        std::map<std::string, TuneResult> out;
        const auto X = take_rows(ps.data.X, ps.split.train);
        for (const auto& slot : model_slots()) {
            const auto y = take_rows(target_for(ps.data, slot.task), ps.split.train);
            try {
                out[slot.key()] = grid_search(cfg.grids.at(slot.key()), X, y, cfg.cv_folds, ps.split.seed);
            } catch (const Error& e) {
                throw e.with_context(slot.key());
            }
        }
        return out;
    });
}

TrainedModel train_on_split(const ModelConfig& cfg, const PreparedSplit& ps) {
    const auto X = take_rows(ps.data.X, ps.split.train);
    const auto y = take_rows(target_for(ps.data, cfg.task), ps.split.train);
    return fit_model(cfg, X, y, ps.data.feature_names);
}

namespace {

MetricBundle evaluate_rows(const TrainedModel& model, const PreparedSplit& ps, const std::vector<std::size_t>& rows) {
    const auto X = take_rows(ps.data.X, rows);
    const auto y = take_rows(target_for(ps.data, model.task()), rows);
    const auto pred = predict(model, X);
    if (model.task() == Task::Classification) {
        std::vector<int> truth(static_cast<std::size_t>(y.size()));
        for (Eigen::Index i = 0; i < y.size(); ++i) truth[static_cast<std::size_t>(i)] = y(i) >= 0.5 ? 1 : 0;
        return to_bundle(classification_metrics(truth, pred.labels));
    }
    return to_bundle(regression_metrics(std::span<const double>(y.data(), static_cast<std::size_t>(y.size())),
                                        std::span<const double>(pred.values.data(),
                                                                static_cast<std::size_t>(pred.values.size()))));
}

std::string primary_name(Task task) { return task == Task::Classification ? "accuracy" : "r2"; }

}  // namespace

SplitEvaluation evaluate_model(const TrainedModel& model, const PreparedSplit& ps) {
    return {evaluate_rows(model, ps, ps.split.validation), evaluate_rows(model, ps, ps.split.test)};
}

std::string pick_champion(const std::vector<ModelResult>& results, Task task) {
    const ModelResult* best = nullptr;
    double best_score = 0.0;
    for (const auto& r : results) {
        if (r.slot.task != task) continue;
        const double s = r.tuned_variant.test.mean_of(primary_name(task));
        if (!best || s > best_score ||
            (s == best_score && complexity_rank(r.slot.family) < complexity_rank(best->slot.family))) {
            best = &r;
            best_score = s;
        }
    }
    if (!best) throw Error(ErrorCode::InvalidArgument, "no results for task " + std::string(to_string(task)));
    return best->slot.key();
}

std::optional<std::string> feature_value_error(const FeatureScaling& f, const Cell& value) {
    if (is_missing(value)) return std::nullopt;
    if (f.kind == ColumnKind::Numeric) {
        const auto* d = std::get_if<double>(&value);
        if (!d) return "expected a number";
        if (!std::isfinite(*d)) return "value must be finite";
        if (f.valid_range && !f.valid_range->contains(*d)) {
            std::ostringstream os;
            os << "value " << *d << " outside [" << f.valid_range->min << ", " << f.valid_range->max << "]";
            return os.str();
        }
        return std::nullopt;
    }
    const auto* s = std::get_if<std::string>(&value);
    if (!s) return "expected a category";
    if (!std::binary_search(f.categories.begin(), f.categories.end(), *s)) return "unseen category '" + *s + "'";
    return std::nullopt;
}

// ---------------------------------------------------------------------------

RunOutputs run_pipeline(const PipelineConfig& cfg, const ProgressFn& progress) {
    const auto note = [&](const std::string& msg) {
        if (progress) progress(msg);
    };
    RunOutputs out;
    auto& report = out.report;

    note("preprocessing");
    const auto prepared = prepare_table(cfg);
    const auto summary = preprocess_summary(prepared);

    const auto base = prepare_split(prepared, cfg.seed);
    note("tuning " + std::to_string(model_slots().size()) + " models on " + std::to_string(base.split.train.size()) +
         " training rows");
    report.tuning = tune_models(cfg, base);

    const auto& slots = model_slots();
    struct Runs {
        std::vector<MetricBundle> dv, dt, tv, tt;
    };
    std::vector<Runs> runs(slots.size());
    std::vector<std::uint64_t> seeds;
    std::map<std::string, TrainedModel> first_tuned;
    NormParams first_norm;
    std::size_t first_train_rows = 0;

    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
        const auto seed = cfg.seed + rep;
        seeds.push_back(seed);
        note("repetition " + std::to_string(rep + 1) + "/" + std::to_string(cfg.repetitions) + " (seed " +
             std::to_string(seed) + ")");
        const auto ps = rep == 0 ? base : prepare_split(prepared, seed);
        for (std::size_t m = 0; m < slots.size(); ++m) {
            const auto& slot = slots[m];
            run_stage("train", [&] {
                try {
                    auto dcfg = default_config(slot.family, slot.task);
                    dcfg.seed = seed;
                    auto tcfg = report.tuning.at(slot.key()).best_config;
                    tcfg.seed = seed;
                    const auto dmodel = train_on_split(dcfg, ps);
                    const auto de = run_stage("evaluate", [&] { return evaluate_model(dmodel, ps); });
                    runs[m].dv.push_back(de.validation);
                    runs[m].dt.push_back(de.test);
                    if (tcfg == dcfg) {
                        runs[m].tv.push_back(de.validation);
                        runs[m].tt.push_back(de.test);
                        if (rep == 0) first_tuned.emplace(slot.key(), dmodel);
                    } else {
                        auto tmodel = train_on_split(tcfg, ps);
                        const auto te = run_stage("evaluate", [&] { return evaluate_model(tmodel, ps); });
                        runs[m].tv.push_back(te.validation);
                        runs[m].tt.push_back(te.test);
                        if (rep == 0) first_tuned.emplace(slot.key(), std::move(tmodel));
                    }
                } catch (const StageError&) {
                    throw;
                } catch (const Error& e) {
                    throw e.with_context(slot.key() + ", repetition " + std::to_string(rep));
                }
                return 0;
            });
        }
        if (rep == 0) {
            first_norm = ps.data.norm;
            first_train_rows = ps.split.train.size();
        }
    }

    for (std::size_t m = 0; m < slots.size(); ++m) {
        ModelResult r;
        r.slot = slots[m];
        r.default_variant.config = default_config(slots[m].family, slots[m].task);
        r.default_variant.config.seed = cfg.seed;
        r.default_variant.validation = aggregate(runs[m].dv, seeds);
        r.default_variant.test = aggregate(runs[m].dt, seeds);
        r.tuned_variant.config = report.tuning.at(slots[m].key()).best_config;
        r.tuned_variant.config.seed = cfg.seed;
        r.tuned_variant.validation = aggregate(runs[m].tv, seeds);
        r.tuned_variant.test = aggregate(runs[m].tt, seeds);
        report.results.push_back(std::move(r));
    }

    note("selecting champions and scoring roster");
    report.champion_classifier = pick_champion(report.results, Task::Classification);
    report.champion_regressor = pick_champion(report.results, Task::Regression);
    const TrainingFingerprint fp{first_train_rows, first_norm.features.size(), cfg.seed};
    out.classifier = ModelArtifact{kArtifactFormatVersion, first_tuned.at(report.champion_classifier), first_norm, fp};
    out.regressor = ModelArtifact{kArtifactFormatVersion, first_tuned.at(report.champion_regressor), first_norm, fp};
    out.roster = run_stage("score", [&] {
        return score_roster(base.data.X, base.data.row_ids, out.classifier.model, out.regressor.model, first_norm,
                            cfg.risk);
    });

    json results = json::array();
    for (const auto& r : report.results) {
        results.push_back({{"model", r.slot.key()},
                           {"label", r.slot.label()},
                           {"task", std::string(to_string(r.slot.task))},
                           {"default",
                            {{"hyperparameters", hyperparameters_to_json(r.default_variant.config)},
                             {"validation", to_json(r.default_variant.validation)},
                             {"test", to_json(r.default_variant.test)}}},
                           {"tuned",
                            {{"hyperparameters", hyperparameters_to_json(r.tuned_variant.config)},
                             {"validation", to_json(r.tuned_variant.validation)},
                             {"test", to_json(r.tuned_variant.test)}}}});
    }
    json tuning = json::object();
    for (const auto& [key, t] : report.tuning) tuning[key] = to_json(t);
    const auto champion = [&](const std::string& key, const char* file) {
        const auto& r = *std::find_if(report.results.begin(), report.results.end(),
                                      [&](const ModelResult& x) { return x.slot.key() == key; });
        const auto metric = primary_name(r.slot.task);
        return json{{"model", key},
                    {"artifact", file},
                    {"metric", metric},
                    {"test_mean", r.tuned_variant.test.mean_of(metric)}};
    };
    std::size_t flagged = 0;
    for (const auto& s : out.roster) flagged += s.flagged ? 1 : 0;

    report.document = {
        {"format", "gradecast-run-report"},
        {"format_version", 1},
        {"config", to_json(cfg)},
        {"seeds", {{"base", cfg.seed}, {"tuning", cfg.seed}, {"repetitions", seeds}}},
        {"preprocess", summary},
        {"features", base.data.feature_names},
        {"split_sizes",
         {{"train", base.split.train.size()},
          {"validation", base.split.validation.size()},
          {"test", base.split.test.size()}}},
        {"tuning", std::move(tuning)},
        {"results", std::move(results)},
        {"champions",
         {{"classification", champion(report.champion_classifier, "champion_classifier.json")},
          {"regression", champion(report.champion_regressor, "champion_regressor.json")}}},
        {"roster", {{"path", "roster.json"}, {"students", out.roster.size()}, {"flagged", flagged}}},
    };
    report.text = render_text_report(report.results, report.tuning, summary);
    return out;
}

// ---------------------------------------------------------------------------

void write_text_file(const fs::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write " + tmp.string());
        out << text;
        if (!out) throw Error(ErrorCode::FileUnreadable, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
    }
}

void write_run_outputs(const RunOutputs& outputs, const fs::path& dir) {
    run_stage("write", [&] {
        auto staging = dir;
        staging += ".partial";
        std::error_code ec;
        fs::remove_all(staging, ec);
        try {
            fs::create_directories(staging);
            write_text_file(staging / "run_report.json", outputs.report.document.dump(2) + "\n");
            write_text_file(staging / "run_report.txt", outputs.report.text);
            save_model(outputs.classifier, staging / "champion_classifier.json");
            save_model(outputs.regressor, staging / "champion_regressor.json");
            write_text_file(staging / "roster.json", roster_to_json(outputs.roster).dump(2) + "\n");
            fs::create_directories(dir);
            for (const auto& entry : fs::directory_iterator(staging))
                fs::rename(entry.path(), dir / entry.path().filename());
            fs::remove_all(staging);
        } catch (const fs::filesystem_error& e) {
            fs::remove_all(staging, ec);
            throw Error(ErrorCode::FileUnreadable, e.what());
        } catch (...) {
            fs::remove_all(staging, ec);
            throw;
        }
        return 0;
    });
}

std::vector<RiskScore> score_file(const fs::path& path, const FeatureSchema& schema, char delimiter,
                                  const ModelArtifact& classifier, const ModelArtifact& regressor, const RiskConfig& cfg,
                                  std::vector<std::string>* skipped) {
    const auto table = load_table(path, schema, delimiter);
    const auto& norm = classifier.norm;
    std::vector<std::size_t> cols;
    for (const auto& f : norm.features) {
        const auto c = schema.find(f.name);
        if (!c) throw Error(ErrorCode::HeaderMismatch, "schema has no column '" + f.name + "' required by the model");
        cols.push_back(*c);
    }
    const auto id_col = schema.identifier_index();

    std::vector<RiskScore> roster;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto line = r < table.line_numbers.size() ? table.line_numbers[r] : r + 2;
        std::string id = "row-" + std::to_string(line);
        if (id_col) {
            if (const auto* s = std::get_if<std::string>(&row[*id_col])) id = *s;
            else if (const auto* d = std::get_if<double>(&row[*id_col])) {
                std::ostringstream os;
                os << *d;
                id = os.str();
            }
        }
        std::vector<Cell> raw;
        std::string problem;
        for (std::size_t j = 0; j < cols.size() && problem.empty(); ++j) {
            raw.push_back(row[cols[j]]);
            if (auto err = feature_value_error(norm.features[j], raw.back())) problem = norm.features[j].name + ": " + *err;
        }
        if (!problem.empty()) {
            if (skipped) skipped->push_back("line " + std::to_string(line) + ": " + problem);
            continue;
        }
        const auto x = transform_features(norm, raw);
        roster.push_back(score_student(x, classifier.model, regressor.model, norm, cfg, std::move(id)));
    }
    sort_roster(roster);
    return roster;
}

// ---------------------------------------------------------------------------

json prepared_split_to_json(const PreparedSplit& ps, const json& summary) {
    const auto& d = ps.data;
    json X = json::array();
    for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(d.X.cols()));
        for (Eigen::Index j = 0; j < d.X.cols(); ++j) row[static_cast<std::size_t>(j)] = d.X(i, j);
        X.push_back(std::move(row));
    }
    return {{"format", "gradecast-prepared"},
            {"format_version", 1},
            {"feature_names", d.feature_names},
            {"row_ids", d.row_ids},
            {"X", std::move(X)},
            {"y_grade", std::vector<double>(d.y_grade.data(), d.y_grade.data() + d.y_grade.size())},
            {"y_pass", std::vector<double>(d.y_pass.data(), d.y_pass.data() + d.y_pass.size())},
            {"norm", norm_to_json(d.norm)},
            {"split",
             {{"train", ps.split.train},
              {"validation", ps.split.validation},
              {"test", ps.split.test},
              {"seed", ps.split.seed}}},
            {"preprocess", summary}};
}

PreparedSplit prepared_split_from_json(const json& doc) {
    try {
        if (doc.at("format") != "gradecast-prepared" || doc.at("format_version") != 1)
            throw Error(ErrorCode::VersionMismatch, "not a format_version 1 prepared-data file");
        PreparedSplit ps;
        auto& d = ps.data;
        d.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        d.row_ids = doc.at("row_ids").get<std::vector<std::string>>();
        const auto& X = doc.at("X");
        const auto n = static_cast<Eigen::Index>(X.size());
        const auto p = static_cast<Eigen::Index>(d.feature_names.size());
        d.X.resize(n, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto row = X.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
            if (static_cast<Eigen::Index>(row.size()) != p)
                throw Error(ErrorCode::InvalidArgument, "prepared row " + std::to_string(i) + " has wrong width");
            for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = row[static_cast<std::size_t>(j)];
        }
        const auto yg = doc.at("y_grade").get<std::vector<double>>();
        const auto yp = doc.at("y_pass").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(yg.size()) != n || static_cast<Eigen::Index>(yp.size()) != n ||
            d.row_ids.size() != yg.size())
            throw Error(ErrorCode::LengthMismatch, "prepared targets do not match row count");
        d.y_grade = Eigen::Map<const Eigen::VectorXd>(yg.data(), n);
        d.y_pass = Eigen::Map<const Eigen::VectorXd>(yp.data(), n);
        d.norm = norm_from_json(doc.at("norm"));
        const auto& s = doc.at("split");
        ps.split.train = s.at("train").get<std::vector<std::size_t>>();
        ps.split.validation = s.at("validation").get<std::vector<std::size_t>>();
        ps.split.test = s.at("test").get<std::vector<std::size_t>>();
        ps.split.seed = s.at("seed").get<std::uint64_t>();
        for (const auto* part : {&ps.split.train, &ps.split.validation, &ps.split.test})
            for (auto r : *part)
                if (r >= static_cast<std::size_t>(n)) throw Error(ErrorCode::InvalidArgument, "split index out of range");
        return ps;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed prepared-data file: ") + e.what());
    }
}

}  // namespace gradecast
