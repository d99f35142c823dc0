#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "gradecast/error.hpp"
#include "gradecast/preprocess.hpp"

using namespace gradecast;

namespace {

FeatureSchema schema_of(const std::vector<std::pair<std::string, ColumnKind>>& preds) {
    std::vector<ColumnSpec> cols;
    for (const auto& [name, kind] : preds) cols.push_back({name, kind, ColumnRole::Predictor, std::nullopt, std::nullopt});
    cols.push_back({"grade", ColumnKind::Numeric, ColumnRole::Target, Range{0, 20}, std::nullopt});
    return make_schema(cols, 10, {0, 20});
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

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = static_cast<long double>(x.size()), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double cov = sxy - sx * sy / n;
    return static_cast<double>(cov / std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n)));
}

}  // namespace

TEST_CASE("imputation fills means and modes") {
    const auto s = schema_of({{"x", ColumnKind::Numeric}, {"c", ColumnKind::Categorical}});
    const auto t = parse_table("x;c;grade\n1;b;5\n;a;6\n5;b;7\n3;;8\n", s);
    const auto fill = fit_imputer(t);
    CHECK(std::get<double>(fill[0]) == doctest::Approx(3.0));
    CHECK(std::get<std::string>(fill[1]) == "b");
    CHECK(is_missing(fill[2]));
    const auto imputed = impute(t);
    CHECK(count_missing_predictors(imputed) == 0);
    CHECK(std::get<double>(imputed.rows[1][0]) == doctest::Approx(3.0));
    CHECK(std::get<std::string>(imputed.rows[3][1]) == "b");
}

TEST_CASE("mode ties go to the lexicographically smaller value") {
    const auto s = schema_of({{"c", ColumnKind::Categorical}});
    const auto t = parse_table("c;grade\nz;1\na;2\n;3\n", s);
    CHECK(std::get<std::string>(fit_imputer(t)[0]) == "a");
}

TEST_CASE("imputing an all-missing predictor fails") {
    const auto s = schema_of({{"x", ColumnKind::Numeric}, {"y", ColumnKind::Numeric}});
    const auto t = parse_table("x;y;grade\n;1;5\n;2;6\n", s);
    CHECK(code_of([&] { impute(t); }) == ErrorCode::AllMissingColumn);
}

TEST_CASE("pearson matches a textbook formula") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 50;
        std::vector<double> x(n), y(n);
        const double rho = std::uniform_real_distribution<double>(-1, 1)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = n01(rng);
            y[i] = rho * x[i] + n01(rng);
        }
        const double r = pearson(x, y);
        CHECK(r == doctest::Approx(oracle_pearson(x, y)).epsilon(1e-9));
        CHECK(std::abs(r) <= 1.0);
        CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-15));
    }
    CHECK(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}) == 0.0);
    CHECK(code_of([] { pearson(std::vector<double>{1, 2}, std::vector<double>{1}); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("selection: relevance, correlation and review stages") {
    const auto s = schema_of({{"a", ColumnKind::Numeric},
                              {"a_copy", ColumnKind::Numeric},
                              {"flat", ColumnKind::Numeric},
                              {"sparse", ColumnKind::Numeric},
                              {"b", ColumnKind::Numeric},
                              {"cat", ColumnKind::Categorical}});
    std::string text = "a;a_copy;flat;sparse;b;cat;grade\n";
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 10);
    for (int i = 0; i < 60; ++i) {
        const double a = u(rng);
        text += std::to_string(a) + ";" + std::to_string(2 * a + 1) + ";7;" + (i % 2 ? "" : std::to_string(u(rng))) +
                ";" + std::to_string(u(rng)) + ";" + (i % 3 ? "x" : "y") + ";" + std::to_string(u(rng)) + "\n";
    }
    const auto t = parse_table(text, s);

    SUBCASE("without review") {
        const auto r = select_features(t, {.max_missing_fraction = 0.3, .keep_list = std::nullopt});
        CHECK(r.report.dropped_high_missing == std::vector<std::string>{"sparse"});
        CHECK(r.report.dropped_low_variance == std::vector<std::string>{"flat"});
        REQUIRE(r.report.dropped_correlated.size() == 1);
        CHECK(std::set<std::string>{r.report.dropped_correlated[0].dropped, r.report.dropped_correlated[0].kept} ==
              std::set<std::string>{"a", "a_copy"});
        CHECK(r.report.dropped_correlated[0].r == doctest::Approx(1.0));
        CHECK(r.report.kept.size() == 3);
        CHECK(r.table.schema.predictor_indices().size() == 3);
        CHECK(r.table.schema.columns[2].role == ColumnRole::Ignored);
    }
    SUBCASE("with review") {
        const auto r = select_features(t, {.keep_list = std::vector<std::string>{"b", "cat", "sparse"}});
        CHECK(r.report.kept == std::vector<std::string>{"b", "cat"});
        CHECK(r.report.dropped_by_review.size() == 1);
    }
    SUBCASE("keep_list naming a non-predictor") {
        CHECK(code_of([&] { select_features(t, {.keep_list = std::vector<std::string>{"grade"}}); }) ==
              ErrorCode::InvalidConfig);
    }
    SUBCASE("everything removed") {
        CHECK(code_of([&] { select_features(t, {.min_variance = 1e9, .keep_list = std::nullopt}); }) == ErrorCode::EmptySelection);
    }
    SUBCASE("invalid cutoff") {
        CHECK(code_of([&] { select_features(t, {.correlation_cutoff = 1.5, .keep_list = std::nullopt}); }) == ErrorCode::InvalidConfig);
    }
}

TEST_CASE("property: no surviving pair exceeds the cutoff") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<std::string, ColumnKind>> preds;
        for (int j = 0; j < 8; ++j) preds.push_back({"f" + std::to_string(j), ColumnKind::Numeric});
        const auto s = schema_of(preds);
        std::string text;
        for (int j = 0; j < 8; ++j) text += "f" + std::to_string(j) + ";";
        text += "grade\n";
        std::vector<std::vector<double>> cols(8, std::vector<double>(80));
        for (int i = 0; i < 80; ++i) {
            const double base = n01(rng);
            for (int j = 0; j < 8; ++j) {
                const double mix = j < 4 ? 0.3 : 1.5;  // first four strongly share a factor
                cols[j][i] = base + mix * n01(rng);
                text += std::to_string(cols[j][i]) + ";";
            }
            text += "5\n";
        }
        const auto t = parse_table(text, s);
        const auto r = select_features(t, {.correlation_cutoff = 0.85, .keep_list = std::nullopt});
        const auto kept = r.table.schema.predictor_indices();
        for (std::size_t a = 0; a < kept.size(); ++a)
            for (std::size_t b = a + 1; b < kept.size(); ++b) {
                std::vector<double> x, y;
                for (const auto& row : t.rows) {
                    x.push_back(std::get<double>(row[kept[a]]));
                    y.push_back(std::get<double>(row[kept[b]]));
                }
                CHECK(std::abs(pearson(x, y)) <= 0.85);
            }
    }
}

TEST_CASE("encode_and_normalize scales with training rows only") {
    const auto s = schema_of({{"x", ColumnKind::Numeric}, {"c", ColumnKind::Categorical}});
    const auto t = parse_table("x;c;grade\n2;b;10\n4;a;20\n6;c;0\n100;b;5\n", s);
    const std::vector<std::size_t> fit{0, 1, 2};
    const auto dm = encode_and_normalize(t, fit);
    REQUIRE(dm.rows() == 4);
    REQUIRE(dm.features() == 2);
    CHECK(dm.X(0, 0) == 0.0);
    CHECK(dm.X(1, 0) == 0.5);
    CHECK(dm.X(2, 0) == 1.0);
    CHECK(dm.X(3, 0) == 1.0);  // clipped
    // categories a, b, c -> codes 0, 1, 2
    CHECK(dm.norm.features[1].categories == std::vector<std::string>{"a", "b", "c"});
    CHECK(dm.X(0, 1) == 0.5);
    CHECK(dm.X(1, 1) == 0.0);
    CHECK(dm.X(2, 1) == 1.0);
    CHECK(dm.y_grade(0) == 0.5);
    CHECK(dm.y_pass(0) == 1.0);
    CHECK(dm.y_pass(2) == 0.0);
    CHECK(dm.y_pass(3) == 0.0);
    CHECK(dm.row_ids[0] == "row-2");

    const Eigen::VectorXd x = transform_features(dm.norm, {Cell{4.0}, Cell{std::string("c")}});
    CHECK(x(0) == 0.5);
    CHECK(x(1) == 1.0);
    CHECK(code_of([&] { transform_features(dm.norm, {Cell{4.0}, Cell{std::string("zzz")}}); }) ==
          ErrorCode::UnseenCategory);
    CHECK(code_of([&] { transform_features(dm.norm, {Cell{4.0}}); }) == ErrorCode::FeatureCountMismatch);
}

TEST_CASE("property: normalized features lie in [0,1] with training extremes attained") {
    std::mt19937_64 rng(23);
    const auto s = schema_of({{"x", ColumnKind::Numeric}, {"y", ColumnKind::Numeric}});
    for (int trial = 0; trial < 25; ++trial) {
        std::string text = "x;y;grade\n";
        std::uniform_real_distribution<double> u(-50, 50), g(0, 20);
        for (int i = 0; i < 40; ++i) text += std::to_string(u(rng)) + ";" + std::to_string(u(rng)) + ";" + std::to_string(g(rng)) + "\n";
        const auto t = parse_table(text, s);
        const auto split = split_rows(t.row_count(), rng());
        const auto dm = encode_and_normalize(t, split.train);
        CHECK(dm.X.minCoeff() >= 0.0);
        CHECK(dm.X.maxCoeff() <= 1.0);
        const auto Xt = take_rows(dm.X, split.train);
        for (Eigen::Index j = 0; j < Xt.cols(); ++j) {
            CHECK(Xt.col(j).minCoeff() == 0.0);
            CHECK(Xt.col(j).maxCoeff() == 1.0);
        }
    }
}

TEST_CASE("grade normalization round-trips") {
    NormParams norm;
    for (double g = 0.0; g <= 20.0; g += 0.125) CHECK(std::abs(norm.denormalize_grade(norm.normalize_grade(g)) - g) <= 1e-12);
    CHECK(norm.denormalize_grade(1.7) == 20.0);
    CHECK(norm.denormalize_grade(-0.2) == 0.0);
}

TEST_CASE("derive_labels uses >= threshold") {
    const std::vector<double> g{9.999, 10.0, 10.5, 0.0};
    CHECK(derive_labels(g, 10.0) == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("split_rows partitions 80/10/10") {
    for (std::size_t n : {10u, 11u, 57u, 4424u}) {
        const auto s = split_rows(n, 42);
        CHECK(s.train.size() == n * 8 / 10);
        CHECK(s.validation.size() == n / 10);
        CHECK(s.train.size() + s.validation.size() + s.test.size() == n);
        std::set<std::size_t> all(s.train.begin(), s.train.end());
        all.insert(s.validation.begin(), s.validation.end());
        all.insert(s.test.begin(), s.test.end());
        CHECK(all.size() == n);
        CHECK(split_rows(n, 42) == s);
    }
    CHECK(split_rows(4424, 42).test.size() == 443);
    CHECK(split_rows(100, 1) != split_rows(100, 2));
    CHECK(code_of([] { split_rows(9, 1); }) == ErrorCode::TooFewRows);
}
