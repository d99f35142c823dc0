#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "gradecast/synthetic.hpp"

#ifndef GRADECAST_SOURCE_DIR
#error "GRADECAST_SOURCE_DIR must be defined"
#endif

namespace fixtures {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto candidate = fs::temp_directory_path() / ("gradecast-" + tag + "-" + std::to_string(rng() % 1000000000ULL));
        if (fs::create_directories(candidate)) {
            path_ = candidate;
            return;
        }
    }
    throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd X(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) X(i, j) = u(rng);
    return X;
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& X) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(X(i, j));
    return out;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

fs::path reference_schema_path() { return fs::path(GRADECAST_SOURCE_DIR) / "data" / "reference_schema.json"; }
fs::path reference_config_path() { return fs::path(GRADECAST_SOURCE_DIR) / "data" / "reference_config.json"; }

fs::path write_small_pipeline(const fs::path& dir, std::size_t rows, std::uint64_t data_seed, std::size_t repetitions) {
    gradecast::SyntheticOptions opts;
    opts.rows = rows;
    opts.seed = data_seed;
    write_file(dir / "data.csv", gradecast::synthetic_reference_csv(opts));

    auto cfg = nlohmann::ordered_json::parse(read_file(reference_config_path()));
    cfg["dataset"]["path"] = "data.csv";
    cfg["schema"] = reference_schema_path().string();
    cfg["repetitions"] = repetitions;
    cfg["cv_folds"] = 3;
    cfg["output_dir"] = "out";
    cfg["grids"] = {
        {"logistic_regression", {{"C", {0.1, 1.0}}}},
        {"decision_tree_classifier", {{"max_depth", {3, nullptr}}}},
        {"random_forest_classifier", {{"n_estimators", {10}}, {"max_depth", {5, nullptr}}}},
        {"linear_regression", {{"fit_intercept", {true, false}}}},
        {"decision_tree_regressor", {{"max_depth", {3, nullptr}}}},
        {"random_forest_regressor", {{"n_estimators", {10}}, {"max_depth", {5}}}},
    };
    const auto path = dir / "config.json";
    write_file(path, cfg.dump(2));
    return path;
}

}  // namespace fixtures
