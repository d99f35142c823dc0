#include <algorithm>
#include <cstdio>
#include <sstream>

#include "gradecast/pipeline.hpp"

namespace gradecast {

namespace {

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string cell(const AggregateReport& r, const std::string& metric) {
    return fixed(r.mean_of(metric)) + " (" + fixed(r.stddev_of(metric)) + ")";
}

void table(std::ostringstream& os, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
        width[c] = header[c].size();
        for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
    }
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            os << (c ? " | " : "") << cells[c];
            if (c + 1 < cells.size()) os << std::string(width[c] - cells[c].size(), ' ');
        }
        os << '\n';
    };
    line(header);
    std::size_t total = 0;
    for (auto w : width) total += w;
    os << std::string(total + 3 * (width.size() - 1), '-') << '\n';
    for (const auto& r : rows) line(r);
    os << '\n';
}

// One default-vs-tuned table for two metrics over the given split.
void comparison(std::ostringstream& os, const std::vector<ModelResult>& results, Task task, bool test,
                const std::string& a, const std::string& a_label, const std::string& b, const std::string& b_label) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : results) {
        if (r.slot.task != task) continue;
        const auto& d = test ? r.default_variant.test : r.default_variant.validation;
        const auto& t = test ? r.tuned_variant.test : r.tuned_variant.validation;
        rows.push_back({r.slot.label(), cell(d, a), cell(t, a), cell(d, b), cell(t, b)});
    }
    table(os, {"Model", "Default " + a_label, "Tuned " + a_label, "Default " + b_label, "Tuned " + b_label}, rows);
}

}  // namespace

std::string render_text_report(const std::vector<ModelResult>& results, const std::map<std::string, TuneResult>& tuning,
                               const nlohmann::json& preprocess) {
    std::ostringstream os;
    os << "Preprocessing\n";
    os << "  rows loaded:  " << preprocess.value("rows_loaded", 0) << '\n';
    os << "  rows dropped: " << preprocess.value("rows_dropped", 0) << '\n';
    os << "  missing after imputation: " << preprocess.value("missing_after_imputation", 0)
       << (preprocess.value("missing_check_passed", false) ? " (check passed)" : " (check FAILED)") << '\n';
    if (preprocess.contains("selection")) {
        const auto kept = preprocess["selection"].value("kept", std::vector<std::string>{});
        os << "  features kept (" << kept.size() << "):";
        for (const auto& k : kept) os << "\n    " << k;
        os << "\n";
    }
    os << '\n';

    const std::size_t reps = results.empty() ? 0 : results.front().tuned_variant.test.runs.size();
    for (const bool test : {true, false}) {
        const std::string split = test ? "test" : "validation";
        os << "Classification, " << split << " split (mean (std) over " << reps << " repetitions)\n";
        comparison(os, results, Task::Classification, test, "accuracy", "Accuracy", "precision", "Precision");
        comparison(os, results, Task::Classification, test, "recall", "Recall", "f1", "F1");
        os << "Regression, " << split << " split (mean (std) over " << reps << " repetitions)\n";
        comparison(os, results, Task::Regression, test, "mae", "MAE", "rmse", "RMSE");
        comparison(os, results, Task::Regression, test, "mse", "MSE", "r2", "R2");
    }

    os << "Hyperparameters (cross-validated on the first training split)\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : results) {
        const auto it = tuning.find(r.slot.key());
        const std::string dcv = it == tuning.end() ? "-" : fixed(it->second.default_score);
        const std::string tcv = it == tuning.end() ? "-" : fixed(it->second.best_cv_score);
        rows.push_back({r.slot.label(), hyperparameters_to_json(r.default_variant.config).dump(), dcv,
                        hyperparameters_to_json(r.tuned_variant.config).dump(), tcv});
    }
    table(os, {"Model", "Default", "Default CV", "Tuned", "Tuned CV"}, rows);
    return os.str();
}

}  // namespace gradecast
