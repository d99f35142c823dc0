#include <doctest.h>

#include <atomic>
#include <future>
#include <set>
#include <thread>

#include "gradecast/error.hpp"
#include "gradecast/server.hpp"
#include "gradecast/service.hpp"

// After Eigen: a system header pulled in by httplib defines a macro that
// collides with Eigen's parameter names.
#include <httplib.h>

using namespace gradecast;
using nlohmann::json;

namespace {

struct Fixture {
    ModelArtifact cls, reg;
    std::vector<RiskScore> roster;
    std::vector<double> ages, grades;
    std::vector<std::string> courses;
};

NormParams make_norm() {
    NormParams norm;
    norm.features.push_back({"Age at enrollment", ColumnKind::Numeric, 17, 46, {}, Range{15, 80}, Cell{20.0}});
    norm.features.push_back({"Course", ColumnKind::Categorical, 0, 1, {"171", "33"}, std::nullopt, Cell{std::string("33")}});
    return norm;
}

Fixture make_fixture() {
    Fixture f;
    const auto norm = make_norm();
    const int n = 30;
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y_grade(n), y_pass(n);
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        f.ages.push_back(17.0 + i);
        f.courses.push_back(i % 2 ? "33" : "171");
        f.grades.push_back(std::fmod(3.7 * i, 20.0));
        const Eigen::VectorXd x = transform_features(norm, {Cell{f.ages.back()}, Cell{f.courses.back()}});
        X.row(i) = x.transpose();
        y_grade(i) = norm.normalize_grade(f.grades.back());
        y_pass(i) = f.grades.back() >= norm.pass_threshold ? 1.0 : 0.0;
        ids.push_back("row-" + std::to_string(i));
    }
    const std::vector<std::string> names = norm.feature_names();
    const auto fp = TrainingFingerprint{static_cast<std::size_t>(n), 2, 7};
    f.cls = {kArtifactFormatVersion, fit_model(default_config(Family::Logistic, Task::Classification), X, y_pass, names),
             norm, fp};
    f.reg = {kArtifactFormatVersion, fit_model(default_config(Family::Tree, Task::Regression), X, y_grade, names), norm,
             fp};
    f.roster = score_roster(X, ids, f.cls.model, f.reg.model, norm, RiskConfig{});
    return f;
}

RiskService make_service(std::optional<std::string> token = std::nullopt) {
    auto f = make_fixture();
    return RiskService(f.cls, f.reg, f.roster, RiskConfig{}, json{{"logistic_regression", {{"accuracy", 0.9}}}}, token);
}

}  // namespace

TEST_CASE("roster, threshold and model endpoints") {
    auto svc = make_service();
    const auto roster = svc.handle("GET", "/api/roster", "");
    CHECK(roster.status == 200);
    REQUIRE(roster.body.is_array());
    CHECK(roster.body.size() == 30);
    for (std::size_t i = 1; i < roster.body.size(); ++i)
        CHECK(roster.body[i - 1]["p_fail"].get<double>() >= roster.body[i]["p_fail"].get<double>());

    CHECK(svc.handle("GET", "/api/threshold", "").body["threshold"] == 0.70);
    const auto model = svc.handle("GET", "/api/model", "");
    CHECK(model.status == 200);
    CHECK(model.body["classifier"]["model"] == "logistic_regression");
    CHECK(model.body["regressor"]["model"] == "decision_tree_regressor");
    CHECK(model.body["features"].size() == 2);
    CHECK(model.body["features"][1]["categories"] == json{"171", "33"});
    CHECK(model.body["metrics"]["logistic_regression"]["accuracy"] == 0.9);
    CHECK(svc.handle("GET", "/api/health", "").body["status"] == "ok");
}

TEST_CASE("threshold updates re-derive every flag") {
    auto svc = make_service();
    std::set<std::string> previous;
    for (const auto& s : svc.snapshot().second) previous.insert(s.student_id);
    for (int step = 1; step < 100; ++step) {
        const double t = step / 100.0;
        const auto r = svc.handle("PUT", "/api/threshold", json{{"threshold", t}}.dump());
        REQUIRE(r.status == 200);
        const auto [threshold, roster] = svc.snapshot();
        CHECK(threshold == t);
        std::set<std::string> flagged;
        for (const auto& s : roster) {
            CHECK(s.flagged == (s.p_fail > t));
            if (s.flagged) flagged.insert(s.student_id);
        }
        CHECK(std::includes(previous.begin(), previous.end(), flagged.begin(), flagged.end()));
        previous = std::move(flagged);
    }
    CHECK(svc.handle("PUT", "/api/threshold", "0.5").status == 200);
}

TEST_CASE("bad threshold bodies") {
    auto svc = make_service();
    CHECK(svc.handle("PUT", "/api/threshold", "{\"threshold\": 1.0}").status == 409);
    CHECK(svc.handle("PUT", "/api/threshold", "{\"threshold\": 0}").status == 409);
    CHECK(svc.handle("PUT", "/api/threshold", "{\"threshold\": -0.2}").status == 409);
    CHECK(svc.handle("PUT", "/api/threshold", "{\"threshold\": \"high\"}").status == 400);
    CHECK(svc.handle("PUT", "/api/threshold", "not json").status == 400);
    CHECK(svc.snapshot().first == 0.70);
}

TEST_CASE("predict reproduces a memorized training row") {
    const auto f = make_fixture();
    auto svc = make_service();
    for (std::size_t i = 0; i < f.ages.size(); i += 7) {
        const json req{{"student_id", "probe"},
                       {"features", {{"Age at enrollment", f.ages[i]}, {"Course", std::stoi(f.courses[i])}}}};
        const auto r = svc.handle("POST", "/api/predict", req.dump());
        REQUIRE(r.status == 200);
        CHECK(r.body["student_id"] == "probe");
        CHECK(r.body["predicted_grade"].get<double>() == doctest::Approx(f.grades[i]).epsilon(1e-12));
    }
}

TEST_CASE("predict imputes missing features and rejects bad ones") {
    auto svc = make_service();
    const auto partial = svc.handle("POST", "/api/predict", R"({"features": {"Course": "33"}})");
    CHECK(partial.status == 200);
    const auto full = svc.handle("POST", "/api/predict", R"({"features": {"Course": "33", "Age at enrollment": 20}})");
    CHECK(partial.body["p_fail"] == full.body["p_fail"]);

    const auto bad = svc.handle("POST", "/api/predict",
                                R"({"features": {"Age at enrollment": 5, "Course": 9999, "Shoe size": 42}})");
    CHECK(bad.status == 400);
    CHECK(bad.body["fields"].contains("Age at enrollment"));
    CHECK(bad.body["fields"].contains("Course"));
    CHECK(bad.body["fields"].contains("Shoe size"));
    CHECK(svc.handle("POST", "/api/predict", R"({"features": {"Course": [1]}})").status == 400);
    CHECK(svc.handle("POST", "/api/predict", "[]").status == 400);
}

TEST_CASE("routing and authentication") {
    auto svc = make_service("s3cret");
    CHECK(svc.handle("GET", "/api/health", "").status == 200);
    CHECK(svc.handle("GET", "/api/roster", "").status == 401);
    CHECK(svc.handle("GET", "/api/roster", "", "Bearer wrong").status == 401);
    CHECK(svc.handle("GET", "/api/roster", "", "Bearer s3cret").status == 200);
    CHECK(svc.handle("DELETE", "/api/roster", "", "Bearer s3cret").status == 405);
    CHECK(svc.handle("GET", "/api/nothing", "", "Bearer s3cret").status == 404);
    CHECK(make_service("").handle("GET", "/api/roster", "").status == 200);
}

TEST_CASE("an empty roster is served as an empty array") {
    auto f = make_fixture();
    RiskService svc(f.cls, f.reg, {}, RiskConfig{});
    const auto r = svc.handle("GET", "/api/roster", "");
    CHECK(r.status == 200);
    CHECK(r.body == json::array());
}

TEST_CASE("mismatched artifact pairs are refused") {
    auto f = make_fixture();
    CHECK_THROWS_AS(RiskService(f.reg, f.cls, {}, RiskConfig{}), Error);
    auto other = f.reg;
    other.norm.features[0].max = 99;
    CHECK_THROWS_AS(RiskService(f.cls, other, {}, RiskConfig{}), Error);
    CHECK_THROWS_AS(RiskService(f.cls, f.reg, {}, RiskConfig{.threshold = 1.5}), Error);
}

TEST_CASE("readers never observe a half-applied threshold") {
    auto svc = make_service();
    std::atomic<bool> done{false};
    std::atomic<int> inconsistent{0};
    std::thread reader([&] {
        while (!done) {
            const auto [t, roster] = svc.snapshot();
            for (const auto& s : roster)
                if (s.flagged != (s.p_fail > t)) ++inconsistent;
        }
    });
    for (int i = 0; i < 500; ++i) svc.set_threshold(std::to_string(0.05 + 0.9 * (i % 19) / 18.0));
    done = true;
    reader.join();
    CHECK(inconsistent == 0);
}

TEST_CASE("http transport") {
    auto svc = make_service("tok");
    std::promise<int> ready;
    auto port_future = ready.get_future();
    ServerOptions opts;
    opts.host = "127.0.0.1";
    opts.port = 0;
    std::thread server([&] { run_server(svc, opts, [&](int port) { ready.set_value(port); }); });
    const int port = port_future.get();

    httplib::Client client("127.0.0.1", port);
    auto health = client.Get("/api/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(client.Get("/api/roster")->status == 401);

    const httplib::Headers auth{{"Authorization", "Bearer tok"}};
    auto roster = client.Get("/api/roster", auth);
    REQUIRE(roster);
    CHECK(roster->status == 200);
    CHECK(json::parse(roster->body).size() == 30);
    auto put = client.Put("/api/threshold", auth, R"({"threshold": 0.4})", "application/json");
    REQUIRE(put);
    CHECK(put->status == 200);
    auto bad = client.Put("/api/threshold", auth, R"({"threshold": 2})", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 409);
    CHECK(client.Get("/api/elsewhere", auth)->status == 404);

    stop_server();
    server.join();
}
