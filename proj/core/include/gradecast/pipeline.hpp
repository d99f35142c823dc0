#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradecast/artifact.hpp"
#include "gradecast/error.hpp"
#include "gradecast/evaluation.hpp"
#include "gradecast/ingest.hpp"
#include "gradecast/preprocess.hpp"
#include "gradecast/risk.hpp"
#include "gradecast/tuning.hpp"

namespace gradecast {

/// The six models, classification first, in report order.
struct ModelSlot {
    Family family;
    Task task;
    std::string key() const { return model_key(family, task); }
    std::string label() const { return model_label(family, task); }
};
const std::vector<ModelSlot>& model_slots();

struct PipelineConfig {
    std::filesystem::path dataset_path;
    char delimiter = ';';
    std::filesystem::path schema_path;
    bool strict_cap = true;
    SelectionConfig selection;
    std::uint64_t seed = 42;
    std::size_t repetitions = 10;
    std::size_t cv_folds = 5;
    std::map<std::string, ParamGrid> grids;  // keyed by model key; every slot present
    RiskConfig risk;
    std::filesystem::path output_dir = "out";
};

/// Relative paths inside the document resolve against its directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig pipeline_config_from_json(const nlohmann::ordered_json& doc, const std::filesystem::path& base_dir);
nlohmann::json to_json(const PipelineConfig& cfg);

/// An Error tagged with the pipeline stage that raised it.
class StageError : public Error {
public:
    StageError(std::string stage, const Error& cause)
        : Error(cause.code(), cause.what()), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Runs `fn`, rethrowing any Error as a StageError for `stage`.
template <class Fn>
auto run_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
}

// ---------------------------------------------------------------------------
// Stage 1: ingest, validate, select, impute

struct PreparedTable {
    FeatureSchema schema;  // as loaded (before selection)
    RawTable table;        // selected and imputed
    std::vector<Cell> fill;
    DropReport drops;
    SelectionReport selection;
    std::size_t missing_before_imputation = 0;
    std::size_t missing_after_imputation = 0;
};

PreparedTable prepare_table(const PipelineConfig& cfg);
nlohmann::json preprocess_summary(const PreparedTable& prepared);

/// Split with `seed`, then encode / normalize with training-split statistics.
struct PreparedSplit {
    DataMatrix data;
    Split split;
};
PreparedSplit prepare_split(const PreparedTable& prepared, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Stage 2: tuning

const Eigen::VectorXd& target_for(const DataMatrix& data, Task task);

/// Grid search for every model slot on the training split.
std::map<std::string, TuneResult> tune_models(const PipelineConfig& cfg, const PreparedSplit& ps);

// ---------------------------------------------------------------------------
// Stage 3/4: training and evaluation on one split

struct SplitEvaluation {
    MetricBundle validation;
    MetricBundle test;
};

SplitEvaluation evaluate_model(const TrainedModel& model, const PreparedSplit& ps);
TrainedModel train_on_split(const ModelConfig& cfg, const PreparedSplit& ps);

// ---------------------------------------------------------------------------
// Full run

struct VariantResult {
    ModelConfig config;  // seed of the first repetition
    AggregateReport validation;
    AggregateReport test;
};

struct ModelResult {
    ModelSlot slot;
    VariantResult default_variant;
    VariantResult tuned_variant;
};

struct RunReport {
    nlohmann::json document;  // structured report (acceptance surface)
    std::string text;         // human-readable tables
    std::vector<ModelResult> results;
    std::map<std::string, TuneResult> tuning;
    std::string champion_classifier;
    std::string champion_regressor;
};

struct RunOutputs {
    RunReport report;
    ModelArtifact classifier;
    ModelArtifact regressor;
    std::vector<RiskScore> roster;
};

using ProgressFn = std::function<void(const std::string&)>;

/// ingest -> validate -> select -> impute -> tune (first repetition's
/// training split) -> per repetition: split, normalize, train default and
/// tuned models, evaluate on validation and test -> champions -> roster.
/// Throws StageError.
RunOutputs run_pipeline(const PipelineConfig& cfg, const ProgressFn& progress = {});

/// Writes run_report.json, run_report.txt, champion_classifier.json,
/// champion_regressor.json and roster.json into `dir`. Files are staged in a
/// sibling directory and moved into place only when every write succeeded.
void write_run_outputs(const RunOutputs& outputs, const std::filesystem::path& dir);

/// Scores a raw delimited file with a champion pair. Rows whose predictors
/// cannot be transformed are skipped and reported in `skipped`.
std::vector<RiskScore> score_file(const std::filesystem::path& path, const FeatureSchema& schema, char delimiter,
                                  const ModelArtifact& classifier, const ModelArtifact& regressor, const RiskConfig& cfg,
                                  std::vector<std::string>* skipped = nullptr);

/// Why `value` cannot be fed to `f` (out of valid range, unseen category,
/// wrong kind), or nullopt when it is acceptable. Missing is acceptable.
std::optional<std::string> feature_value_error(const FeatureScaling& f, const Cell& value);

/// Picks the champion among tuned results for a task: best mean test primary
/// metric, ties to the simpler family, then report order.
std::string pick_champion(const std::vector<ModelResult>& results, Task task);

// ---------------------------------------------------------------------------
// Staged CLI files

nlohmann::json prepared_split_to_json(const PreparedSplit& ps, const nlohmann::json& summary);
PreparedSplit prepared_split_from_json(const nlohmann::json& doc);

/// Text tables in the default-vs-tuned layout.
std::string render_text_report(const std::vector<ModelResult>& results, const std::map<std::string, TuneResult>& tuning,
                               const nlohmann::json& preprocess);

/// Writes `text` to `path` atomically (temp file + rename).
void write_text_file(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace gradecast
