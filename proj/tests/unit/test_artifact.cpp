#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gradecast/artifact.hpp"
#include "gradecast/error.hpp"

using namespace gradecast;

namespace {

struct Trained {
    ModelArtifact artifact;
    Eigen::MatrixXd X;
};

Trained train(Family family, Task task, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Trained t;
    t.X = fixtures::random_matrix(rng, 60, 3);
    Eigen::VectorXd y(60);
    for (int i = 0; i < 60; ++i)
        y(i) = task == Task::Classification ? (t.X(i, 0) + t.X(i, 2) > 1.0 ? 1.0 : 0.0) : 0.5 * t.X(i, 0) + 0.1 * t.X(i, 1);
    auto cfg = default_config(family, task);
    if (family == Family::Forest) cfg.hp.n_estimators = 7;
    cfg.seed = seed;
    t.artifact.model = fit_model(cfg, t.X, y, {"a", "b", "c"});
    for (const auto* name : {"a", "b", "c"}) {
        FeatureScaling f;
        f.name = name;
        f.max = 1.0;
        f.fill = 0.5;
        t.artifact.norm.features.push_back(f);
    }
    t.artifact.fingerprint = {60, 3, seed};
    return t;
}

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("artifacts round-trip bit for bit for every family") {
    fixtures::TempDir dir("artifact");
    for (auto [f, task] : {std::pair{Family::Linear, Task::Regression}, {Family::Logistic, Task::Classification},
                           {Family::Tree, Task::Classification}, {Family::Tree, Task::Regression},
                           {Family::Forest, Task::Classification}, {Family::Forest, Task::Regression}}) {
        const auto t = train(f, task, 12);
        const auto path = dir / (model_key(f, task) + ".json");
        save_model(t.artifact, path);
        const auto back = load_model(path);
        CHECK(back.model.config == t.artifact.model.config);
        CHECK(back.model.feature_names == t.artifact.model.feature_names);
        CHECK(back.norm == t.artifact.norm);
        CHECK(back.fingerprint == t.artifact.fingerprint);
        const auto a = predict(t.artifact.model, t.X);
        const auto b = predict(back.model, t.X);
        for (Eigen::Index i = 0; i < t.X.rows(); ++i) CHECK(a.values(i) == b.values(i));
        CHECK(a.labels == b.labels);
        // Saving the reloaded artifact reproduces the same bytes.
        const auto again = dir / "again.json";
        save_model(back, again);
        CHECK(fixtures::read_file(path) == fixtures::read_file(again));
        CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    }
}

TEST_CASE("version mismatches and corrupt documents are rejected") {
    const auto t = train(Family::Tree, Task::Classification, 3);
    auto doc = artifact_to_json(t.artifact);

    auto wrong_version = doc;
    wrong_version["format_version"] = 2;
    CHECK(code_of([&] { artifact_from_json(wrong_version); }) == ErrorCode::VersionMismatch);

    auto no_tag = doc;
    no_tag.erase("format");
    CHECK(code_of([&] { artifact_from_json(no_tag); }) == ErrorCode::CorruptArtifact);

    auto bad_child = doc;
    bad_child["parameters"]["left"][0] = 999;
    CHECK(code_of([&] { artifact_from_json(bad_child); }) == ErrorCode::CorruptArtifact);

    auto missing_norm = doc;
    missing_norm.erase("norm");
    CHECK(code_of([&] { artifact_from_json(missing_norm); }) == ErrorCode::CorruptArtifact);

    fixtures::TempDir dir("corrupt");
    fixtures::write_file(dir / "trunc.json", doc.dump().substr(0, 40));
    CHECK(code_of([&] { load_model(dir / "trunc.json"); }) == ErrorCode::CorruptArtifact);
    CHECK(code_of([&] { load_model(dir / "absent.json"); }) == ErrorCode::FileUnreadable);
}

TEST_CASE("predict rejects the wrong feature count") {
    const auto t = train(Family::Logistic, Task::Classification, 4);
    CHECK(code_of([&] { predict(t.artifact.model, Eigen::MatrixXd::Zero(2, 5)); }) == ErrorCode::FeatureCountMismatch);
}
