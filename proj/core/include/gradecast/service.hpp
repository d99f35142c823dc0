#pragma once

#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradecast/artifact.hpp"
#include "gradecast/risk.hpp"

namespace gradecast {

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

/// Transport-independent request handling for the risk API. One model pair,
/// one roster; only the threshold mutates, and it is updated together with
/// every flag under an exclusive lock so readers never see a mixed state.
class RiskService {
public:
    /// Throws ModelPairMismatch when the artifacts disagree on features or
    /// normalization, UnsupportedModel when the tasks are not
    /// (classification, regression).
    RiskService(ModelArtifact classifier, ModelArtifact regressor, std::vector<RiskScore> roster, RiskConfig cfg,
                nlohmann::json metrics = nlohmann::json::object(), std::optional<std::string> token = std::nullopt);

    /// Dispatches `method path`. `authorization` is the raw header value.
    ServiceResponse handle(const std::string& method, const std::string& path, const std::string& body,
                           const std::string& authorization = {});

    ServiceResponse roster() const;
    ServiceResponse threshold() const;
    ServiceResponse set_threshold(const std::string& body);
    ServiceResponse predict(const std::string& body) const;
    ServiceResponse model() const;
    ServiceResponse health() const;

    bool authorized(const std::string& authorization) const;

    /// Consistent copy of (threshold, roster).
    std::pair<double, std::vector<RiskScore>> snapshot() const;

private:
    ModelArtifact classifier_;
    ModelArtifact regressor_;
    nlohmann::json metrics_;
    std::optional<std::string> token_;
    std::size_t top_k_;

    mutable std::shared_mutex mutex_;
    double threshold_;
    std::vector<RiskScore> roster_;
};

}  // namespace gradecast
