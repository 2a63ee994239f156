#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "corral/rng.hpp"

using corral::Rng;

TEST_CASE("philox matches the Random123 known-answer vectors") {
    const auto zero = Rng::philox({0, 0, 0, 0}, {0, 0});
    CHECK(zero == Rng::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    const auto ones = Rng::philox({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(ones == Rng::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
}

TEST_CASE("same key and stream give the same sequence") {
    Rng a(42, 7);
    Rng b(42, 7);
    for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());
}

TEST_CASE("distinct streams and keys diverge") {
    Rng a(42, 7);
    Rng b(42, 8);
    Rng c(43, 7);
    int same_ab = 0;
    int same_ac = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        same_ab += x == b();
        same_ac += x == c();
    }
    CHECK(same_ab == 0);
    CHECK(same_ac == 0);
}

TEST_CASE("split does not advance the parent") {
    Rng parent(5, 1);
    Rng copy = parent;
    Rng child = parent.split(3);
    CHECK(parent() == copy());
    Rng child_again = copy.split(3);
    CHECK(child() == child_again());
    CHECK(child() != parent());
}

TEST_CASE("uniform01 lies in [0,1) with the right mean") {
    Rng rng(1, 1);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_index covers its range evenly") {
    Rng rng(2, 1);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto j = rng.uniform_index(7);
        REQUIRE(j < 7);
        ++counts[j];
    }
    for (int c : counts) CHECK(std::abs(c - n / 7) < 400);
    CHECK(rng.uniform_index(1) == 0);
}

TEST_CASE("normal draws have zero mean and unit variance") {
    Rng rng(3, 1);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("derive_seed separates labels and indices") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t label = 0; label < 10; ++label)
        for (std::uint64_t index = 0; index < 100; ++index) seen.insert(corral::derive_seed(99, label, index));
    CHECK(seen.size() == 1000);
    CHECK(corral::derive_seed(1, 2, 3) == corral::derive_seed(1, 2, 3));
    CHECK(corral::derive_seed(1, 2, 3) != corral::derive_seed(2, 2, 3));
}
