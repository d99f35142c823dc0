#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gradecast/ingest.hpp"
#include "gradecast/pipeline.hpp"

namespace fixtures {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols, double lo = 0.0, double hi = 1.0);
std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& X);
std::vector<double> to_vector(const Eigen::VectorXd& v);

/// The shipped reference schema in the source tree.
std::filesystem::path reference_schema_path();
std::filesystem::path reference_config_path();

/// Writes a synthetic reference-layout CSV plus a config (shipped schema,
/// shipped keep_list, small grids) into `dir`; returns the config path.
std::filesystem::path write_small_pipeline(const std::filesystem::path& dir, std::size_t rows, std::uint64_t data_seed,
                                           std::size_t repetitions = 1);

}  // namespace fixtures
