#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "corral/errors.hpp"
#include "corral/exp3p_master.hpp"

using namespace corral;

TEST_CASE("EXP3.P starts uniform") {
    Exp3pMaster master(4, 0.1);
    for (double p : master.probabilities()) CHECK(p == 0.25);
}

TEST_CASE("EXP3.P single update matches the closed form") {
    Exp3pMaster master(2, 0.1);
    master.update(0, 1.0);
    CHECK(master.cumulative_gains()[0] == doctest::Approx(2.1));
    CHECK(master.cumulative_gains()[1] == doctest::Approx(0.1));
    const double e2 = std::exp(2.0);
    CHECK(master.probabilities()[0] == doctest::Approx(0.8 * e2 / (e2 + 1.0) + 0.1));
    CHECK(master.probabilities()[1] == doctest::Approx(0.8 / (e2 + 1.0) + 0.1));
}

TEST_CASE("zero rewards keep uniform probabilities") {
    Exp3pMaster master(3, 0.1);
    for (int t = 0; t < 1000; ++t) {
        master.update(static_cast<std::size_t>(t % 3), 0.0);
        for (double p : master.probabilities()) REQUIRE(p == doctest::Approx(1.0 / 3.0));
    }
}

TEST_CASE("exploration floor and normalization hold under random play") {
    Exp3pMaster master(6, 0.05);
    Rng rng(1, 1);
    for (int t = 0; t < 20000; ++t) {
        const auto chosen = master.sample(rng);
        master.update(chosen, chosen == 2 ? 1.0 : rng.uniform01() * 0.5);
        const auto& p = master.probabilities();
        REQUIRE(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-12);
        for (double x : p) REQUIRE(x >= 0.05);
    }
    CHECK(master.probabilities()[2] > 0.5);
}

TEST_CASE("probabilities stay finite for very large gains") {
    Exp3pMaster master(2, 0.25);
    for (int t = 0; t < 1000000; ++t) master.update(0, 1.0);
    for (double p : master.probabilities()) CHECK(std::isfinite(p));
    CHECK(master.cumulative_gains()[0] > 1e6);
    CHECK(master.probabilities()[1] == doctest::Approx(0.25));
}

TEST_CASE("gain estimates are optimistic") {
    // Base j pays Bernoulli(mu_j); probabilities are held fixed so the estimator mean is exact.
    const std::vector<double> mu{0.6, 0.3};
    const std::vector<double> probs{0.7, 0.3};
    const double p = 0.1;
    Rng rng(2, 1);
    const int n = 200000;
    std::vector<double> sum(2, 0.0), sq(2, 0.0);
    for (int t = 0; t < n; ++t) {
        const std::size_t chosen = rng.uniform01() < probs[0] ? 0 : 1;
        const double r = rng.bernoulli(mu[chosen]) ? 1.0 : 0.0;
        for (std::size_t j = 0; j < 2; ++j) {
            const double est = ((j == chosen ? r : 0.0) + p / 2.0) / probs[j];
            sum[j] += est;
            sq[j] += est * est;
        }
    }
    for (std::size_t j = 0; j < 2; ++j) {
        const double mean = sum[j] / n;
        const double se = std::sqrt((sq[j] / n - mean * mean) / n);
        CHECK(mean >= mu[j] - 3.0 * se);
    }
}

TEST_CASE("default exploration rate") {
    CHECK(Exp3pMaster::default_exploration(1000, 2, std::nullopt) == doctest::Approx(0.1));
    const double a = 0.5;
    const double expected = std::pow(10000.0, -(1 - a) / (2 - a)) * std::pow(4.0, -1 / (2 - a));
    CHECK(Exp3pMaster::default_exploration(10000, 4, a) == doctest::Approx(expected));
    CHECK(Exp3pMaster::default_exploration(1, 4, std::nullopt) == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("exploration must not exceed 1/(2M)") {
    CHECK_THROWS_AS(Exp3pMaster(4, 0.2), ContractViolation);
    CHECK_THROWS_AS(Exp3pMaster(4, 0.0), ContractViolation);
    CHECK_NOTHROW(Exp3pMaster(4, 0.125));
}
