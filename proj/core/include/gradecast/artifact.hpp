#pragma once

#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "gradecast/model.hpp"
#include "gradecast/preprocess.hpp"

namespace gradecast {

/// Artifact layout version. Readers reject any other value.
inline constexpr int kArtifactFormatVersion = 1;

struct TrainingFingerprint {
    std::size_t rows = 0;
    std::size_t features = 0;
    std::uint64_t seed = 0;
    friend bool operator==(const TrainingFingerprint&, const TrainingFingerprint&) = default;
};

struct ModelArtifact {
    int format_version = kArtifactFormatVersion;
    TrainedModel model;
    NormParams norm;
    TrainingFingerprint fingerprint;
};

nlohmann::json norm_to_json(const NormParams& norm);
NormParams norm_from_json(const nlohmann::json& doc);

/// JSON document with keys: format, format_version, config, feature_names,
/// parameters, norm, training_fingerprint. Doubles are written in shortest
/// round-trip form, so a reload reproduces every parameter bit for bit.
nlohmann::json artifact_to_json(const ModelArtifact& artifact);
/// Throws VersionMismatch or CorruptArtifact; never returns a partial model.
ModelArtifact artifact_from_json(const nlohmann::json& doc);

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace gradecast
