#include <doctest.h>

#include <cmath>

#include "corral/bound.hpp"
#include "corral/errors.hpp"

using namespace corral;

TEST_CASE("epsilon-greedy descriptor exponent depends on k") {
    const std::size_t horizon = 10000;
    const double delta = 1.0 / horizon;
    const auto two = bound_descriptor(BaseKind::kEpsilonGreedy, 2, 0, delta, horizon);
    CHECK(two.alpha() == 0.5);
    CHECK(two.coeff() == doctest::Approx(16.0 * std::sqrt(std::log(1.0 / delta))));
    CHECK(bound_descriptor(BaseKind::kEpsilonGreedy, 5, 0, delta, horizon).alpha() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("LinUCB descriptor scales with the dimension") {
    const auto d2 = bound_descriptor(BaseKind::kLinUcb, 50, 2, 0.01, 1000);
    const auto d4 = bound_descriptor(BaseKind::kLinUcb, 50, 4, 0.01, 1000);
    CHECK(d2.alpha() == 0.5);
    CHECK(d2.coeff() == doctest::Approx(2.0 * std::log(100.0)));
    CHECK(d4.coeff() == doctest::Approx(2.0 * d2.coeff()));
    CHECK_THROWS_AS(bound_descriptor(BaseKind::kLinUcb, 50, 0, 0.01, 1000), ContractViolation);
}

TEST_CASE("UCB and EXP3 descriptors") {
    const auto ucb = bound_descriptor(BaseKind::kUcb, 4, 0, 0.001, 100);
    CHECK(ucb.alpha() == 0.5);
    CHECK(ucb.coeff() == doctest::Approx(2.0 * std::log(100.0 * 4.0 / 0.001)));
    const auto exp3 = bound_descriptor(BaseKind::kExp3, 4, 0, 0.001, 100);
    CHECK(exp3.coeff() == ucb.coeff());
}

TEST_CASE("descriptor validation") {
    CHECK_THROWS_AS(BoundDescriptor(0.4, 1.0), ContractViolation);
    CHECK_THROWS_AS(BoundDescriptor(1.0, 1.0), ContractViolation);
    CHECK_THROWS_AS(BoundDescriptor(0.5, -1.0), ContractViolation);
    CHECK_THROWS_AS(parse_base_kind("thompson"), ConfigError);
    CHECK(parse_base_kind("egreedy") == BaseKind::kEpsilonGreedy);
}

TEST_CASE("per-round bound is nonincreasing") {
    for (double alpha : {0.5, 2.0 / 3.0, 0.9}) {
        const BoundDescriptor b(alpha, 3.0);
        CHECK(b.per_round(0) == b.per_round(1));
        double prev = b.per_round(1);
        for (std::size_t s = 2; s <= 1000000; ++s) {
            const double cur = b.per_round(s);
            REQUIRE(cur <= prev);
            prev = cur;
        }
    }
}

TEST_CASE("bound values") {
    const BoundDescriptor b(0.5, 1.0);
    CHECK(b.value(100.0) == doctest::Approx(10.0));
    CHECK(b.per_round(4) == doctest::Approx(0.5));
}
