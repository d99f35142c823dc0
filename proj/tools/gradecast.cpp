// gradecast: staged command-line front end for the pass/fail and grade
// prediction pipeline, plus the HTTP risk service.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gradecast/pipeline.hpp"
#include "gradecast/server.hpp"
#include "gradecast/service.hpp"
#include "gradecast/synthetic.hpp"

namespace fs = std::filesystem;
using namespace gradecast;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> repetitions;
    std::string out;
};

PipelineConfig load_config(const CommonArgs& args) {
    auto cfg = run_stage("config", [&] { return load_pipeline_config(args.config); });
    if (args.seed) cfg.seed = *args.seed;
    if (args.repetitions) {
        if (*args.repetitions < 1) throw StageError("config", Error(ErrorCode::InvalidConfig, "--repetitions must be >= 1"));
        cfg.repetitions = *args.repetitions;
    }
    if (!args.out.empty()) cfg.output_dir = args.out;
    return cfg;
}

fs::path out_dir(const CommonArgs& args) { return args.out.empty() ? fs::path("out") : fs::path(args.out); }

void log(const std::string& msg) { std::cerr << "gradecast: " << msg << '\n'; }

void write_json(const fs::path& path, const json& doc) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    write_text_file(path, doc.dump(2) + "\n");
    log("wrote " + path.string());
}

// -- stages ----------------------------------------------------------------

void cmd_preprocess(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto prepared = prepare_table(cfg);
    const auto summary = preprocess_summary(prepared);
    const auto ps = prepare_split(prepared, cfg.seed);
    write_json(cfg.output_dir / "preprocess_report.json", summary);
    write_json(cfg.output_dir / "prepared.json", prepared_split_to_json(ps, summary));
}

PreparedSplit read_prepared(const fs::path& dir) {
    return run_stage("load", [&] { return prepared_split_from_json(read_json_file(dir / "prepared.json")); });
}

void cmd_tune(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto ps = read_prepared(cfg.output_dir);
    json doc = json::object();
    for (const auto& [key, result] : tune_models(cfg, ps)) {
        doc[key] = to_json(result);
        log(key + ": best cv score " + std::to_string(result.best_cv_score));
    }
    write_json(cfg.output_dir / "tuning.json", doc);
}

void cmd_train(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto ps = read_prepared(cfg.output_dir);
    const auto tuning_path = cfg.output_dir / "tuning.json";
    const json tuning = fs::exists(tuning_path) ? read_json_file(tuning_path) : json::object();
    if (tuning.empty()) log("no tuning.json; training library defaults");
    fs::create_directories(cfg.output_dir / "models");
    for (const auto& slot : model_slots()) {
        run_stage("train", [&] {
            auto mc = tuning.contains(slot.key()) ? config_from_json(tuning[slot.key()].at("best_config"))
                                                  : default_config(slot.family, slot.task);
            mc.seed = ps.split.seed;
            ModelArtifact a{kArtifactFormatVersion, train_on_split(mc, ps), ps.data.norm,
                            TrainingFingerprint{ps.split.train.size(), ps.data.features(), ps.split.seed}};
            save_model(a, cfg.output_dir / "models" / (slot.key() + ".json"));
            log("trained " + slot.key());
            return 0;
        });
    }
}

void cmd_evaluate(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto ps = read_prepared(cfg.output_dir);
    std::vector<ModelResult> results;
    std::map<std::string, ModelArtifact> artifacts;
    json doc = json::object();
    for (const auto& slot : model_slots()) {
        run_stage("evaluate", [&] {
            auto a = load_model(cfg.output_dir / "models" / (slot.key() + ".json"));
            const auto e = evaluate_model(a.model, ps);
            ModelResult r;
            r.slot = slot;
            r.tuned_variant.config = a.model.config;
            r.tuned_variant.validation = aggregate({e.validation}, {ps.split.seed});
            r.tuned_variant.test = aggregate({e.test}, {ps.split.seed});
            doc[slot.key()] = {{"hyperparameters", hyperparameters_to_json(a.model.config)},
                               {"validation", to_json(r.tuned_variant.validation)},
                               {"test", to_json(r.tuned_variant.test)}};
            results.push_back(std::move(r));
            artifacts.emplace(slot.key(), std::move(a));
            return 0;
        });
    }
    const auto cls = pick_champion(results, Task::Classification);
    const auto reg = pick_champion(results, Task::Regression);
    doc["champions"] = {{"classification", cls}, {"regression", reg}};
    write_json(cfg.output_dir / "evaluation.json", doc);
    run_stage("write", [&] {
        save_model(artifacts.at(cls), cfg.output_dir / "champion_classifier.json");
        save_model(artifacts.at(reg), cfg.output_dir / "champion_regressor.json");
        return 0;
    });
    log("champions: " + cls + ", " + reg);
}

void cmd_score(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto cls = run_stage("load", [&] { return load_model(cfg.output_dir / "champion_classifier.json"); });
    const auto reg = run_stage("load", [&] { return load_model(cfg.output_dir / "champion_regressor.json"); });
    std::vector<std::string> skipped;
    const auto roster = run_stage("score", [&] {
        return score_file(cfg.dataset_path, load_schema(cfg.schema_path), cfg.delimiter, cls, reg, cfg.risk, &skipped);
    });
    for (const auto& s : skipped) log("skipped " + s);
    write_json(cfg.output_dir / "roster.json", roster_to_json(roster));
}

void cmd_run(const CommonArgs& args) {
    const auto cfg = load_config(args);
    const auto outputs = run_pipeline(cfg, log);
    write_run_outputs(outputs, cfg.output_dir);
    std::cout << outputs.report.text;
    log("outputs in " + cfg.output_dir.string());
}

struct ServeArgs {
    int port = 8080;
    std::string host = "0.0.0.0";
    std::string token_env;
    std::string static_dir;
};

void cmd_serve(const CommonArgs& args, const ServeArgs& sargs) {
    RiskConfig risk;
    fs::path dir = out_dir(args);
    if (!args.config.empty()) {
        const auto cfg = load_config(args);
        risk = cfg.risk;
        dir = cfg.output_dir;
    }
    const auto cls = run_stage("load", [&] { return load_model(dir / "champion_classifier.json"); });
    const auto reg = run_stage("load", [&] { return load_model(dir / "champion_regressor.json"); });
    const auto roster = run_stage("load", [&] {
        return fs::exists(dir / "roster.json") ? roster_from_json(read_json_file(dir / "roster.json"))
                                               : std::vector<RiskScore>{};
    });
    json metrics = json::object();
    if (fs::exists(dir / "run_report.json")) {
        const auto report = read_json_file(dir / "run_report.json");
        for (const auto& r : report.value("results", json::array()))
            metrics[r.at("model").get<std::string>()] = r.at("tuned").at("test").at("mean");
    }
    std::optional<std::string> token;
    if (!sargs.token_env.empty()) {
        if (const char* v = std::getenv(sargs.token_env.c_str()); v && *v) token = v;
        else log("warning: $" + sargs.token_env + " is unset; authentication disabled");
    }
    RiskService service(cls, reg, roster, risk, metrics, token);
    ServerOptions opts;
    opts.host = sargs.host;
    opts.port = sargs.port;
    if (!sargs.static_dir.empty()) opts.static_dir = sargs.static_dir;
    std::signal(SIGINT, [](int) { stop_server(); });
    std::signal(SIGTERM, [](int) { stop_server(); });
    run_stage("serve", [&] {
        run_server(service, opts, [&](int port) { log("listening on " + opts.host + ":" + std::to_string(port)); });
        return 0;
    });
}

void cmd_synth(std::size_t rows, std::uint64_t seed, const std::string& path) {
    SyntheticOptions o;
    o.rows = rows;
    o.seed = seed;
    write_text_file(path, synthetic_reference_csv(o));
    log("wrote " + std::to_string(rows) + " synthetic rows to " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradecast: student pass/fail and grade prediction pipeline"};
    app.require_subcommand(1);
    CommonArgs args;
    ServeArgs sargs;

    const auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", args.config, "Pipeline config (JSON)");
        if (config_required) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", args.seed, "Override the split / model seed");
        sub->add_option("--repetitions", args.repetitions, "Override the number of repetitions");
        sub->add_option("--out", args.out, "Output directory (overrides output_dir)");
    };

    auto* preprocess = app.add_subcommand("preprocess", "Ingest, validate, select, impute, split, normalize");
    auto* tune = app.add_subcommand("tune", "Grid search with k-fold CV on the training split");
    auto* train = app.add_subcommand("train", "Fit the tuned configuration of every model");
    auto* evaluate = app.add_subcommand("evaluate", "Score the trained models and pick champions");
    auto* score = app.add_subcommand("score", "Write the risk roster for the configured dataset");
    auto* run = app.add_subcommand("run", "All stages with repetitions; writes the run report");
    for (auto* sub : {preprocess, tune, train, evaluate, score, run}) add_common(sub, true);

    auto* serve = app.add_subcommand("serve", "Serve champion artifacts and the roster over HTTP");
    add_common(serve, false);
    serve->add_option("--port", sargs.port, "Listen port")->capture_default_str();
    serve->add_option("--host", sargs.host, "Listen address")->capture_default_str();
    serve->add_option("--token-env", sargs.token_env, "Environment variable holding the bearer token");
    serve->add_option("--static", sargs.static_dir, "Directory of static files to mount at /");

    std::size_t synth_rows = 4424;
    std::uint64_t synth_seed = 1;
    std::string synth_path;
    auto* synth = app.add_subcommand("synth", "Write a synthetic table with the reference column layout");
    synth->add_option("--rows", synth_rows, "Row count")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
    synth->add_option("--out", synth_path, "Output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*preprocess) cmd_preprocess(args);
        else if (*tune) cmd_tune(args);
        else if (*train) cmd_train(args);
        else if (*evaluate) cmd_evaluate(args);
        else if (*score) cmd_score(args);
        else if (*run) cmd_run(args);
        else if (*serve) cmd_serve(args, sargs);
        else if (*synth) cmd_synth(synth_rows, synth_seed, synth_path);
    } catch (const StageError& e) {
        std::cerr << "error: stage=" << e.stage() << " code=" << to_string(e.code()) << ": " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: code=" << to_string(e.code()) << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
