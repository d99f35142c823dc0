#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "gradecast/random.hpp"

using gradecast::SplitMix64;

TEST_CASE("splitmix64 reproduces the published sequence for seed 1234567") {
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);
    CHECK(rng.next() == 4593380528125082431ULL);
    CHECK(rng.next() == 16408922859458223821ULL);
}

TEST_CASE("below stays in range and hits every value") {
    SplitMix64 rng(7);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++seen[v];
    }
    for (int c : seen) CHECK(c > 800);
}

TEST_CASE("uniform lies in [0, 1)") {
    SplitMix64 rng(99);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("shuffled_indices is a seeded permutation") {
    const auto a = gradecast::shuffled_indices(100, 5);
    const auto b = gradecast::shuffled_indices(100, 5);
    const auto c = gradecast::shuffled_indices(100, 6);
    CHECK(a == b);
    CHECK(a != c);
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> iota(100);
    std::iota(iota.begin(), iota.end(), 0);
    CHECK(sorted == iota);
    CHECK(gradecast::shuffled_indices(0, 1).empty());
}
