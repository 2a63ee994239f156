#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "corral/bases.hpp"
#include "corral/config.hpp"
#include "corral/errors.hpp"
#include "support.hpp"

using namespace corral;
using corral::testing::mean_final_regret;
using corral::testing::regret_alone;

TEST_CASE("UCB plays the lowest-index unpulled arm first") {
    UcbLearner ucb(3);
    const ActionSet set(3);
    CHECK(std::isinf(ucb.index(0)));
    CHECK(ucb.propose(set).probabilities(set)[0] == 1.0);
    ucb.observe(set, 0, 1.0);
    CHECK(ucb.propose(set).probabilities(set)[1] == 1.0);
}

TEST_CASE("UCB observation accumulates counts and sums") {
    UcbLearner ucb(2);
    const ActionSet set(2);
    ucb.observe(set, 0, 1.0);
    CHECK(ucb.stats().count(0) == 1.0);
    CHECK(ucb.stats().sum(0) == 1.0);
    ucb.observe(set, 0, 1.0);
    CHECK(ucb.stats().count(0) == 2.0);
    CHECK(ucb.stats().sum(0) == 2.0);
    CHECK(ucb.rounds() == 2);
}

TEST_CASE("UCB index matches the closed form") {
    UcbLearner ucb(2);
    const ActionSet set(2);
    for (int i = 0; i < 100; ++i) ucb.observe(set, 0, i % 2 == 0 ? 1.0 : 0.0);
    for (int i = 0; i < 900; ++i) ucb.observe(set, 1, 0.0);
    CHECK(ucb.index(0) == doctest::Approx(0.5 + std::sqrt(2.0 * std::log(1e9) / 100.0)));
}

TEST_CASE("UCB ties go to the lowest index") {
    UcbLearner ucb(2);
    const ActionSet set(2);
    ucb.observe(set, 0, 0.5);
    ucb.observe(set, 1, 0.5);
    CHECK(ucb.index(0) == ucb.index(1));
    CHECK(ucb.propose(set).probabilities(set)[0] == 1.0);
}

TEST_CASE("propose is pure") {
    EpsilonGreedyLearner eg(2, 2.0);
    const ActionSet set(2);
    eg.observe(set, 1, 1.0);
    const auto a = eg.propose(set);
    const auto b = eg.propose(set);
    CHECK(a == b);
    CHECK(eg.rounds() == 1);
}

TEST_CASE("epsilon-greedy mixture at c=2, t=4") {
    EpsilonGreedyLearner eg(2, 2.0);
    const ActionSet set(2);
    eg.observe(set, 0, 0.0);
    eg.observe(set, 1, 1.0);
    eg.observe(set, 0, 0.0);
    eg.observe(set, 1, 1.0);
    CHECK(eg.epsilon() == 0.5);
    const auto p = eg.propose(set).probabilities(set);
    CHECK(p[1] == doctest::Approx(0.75));
    CHECK(p[0] == doctest::Approx(0.25));
}

TEST_CASE("epsilon-greedy explores fully before its first observation") {
    EpsilonGreedyLearner eg(3, 0.5);
    CHECK(eg.epsilon() == 1.0);
    CHECK_THROWS_AS(EpsilonGreedyLearner(2, 0.0), ContractViolation);
}

TEST_CASE("EXP3 starts uniform and stays a distribution") {
    Exp3Learner exp3(4);
    const ActionSet set(4);
    for (double p : exp3.propose(set).probabilities(set)) CHECK(p == doctest::Approx(0.25));
    Rng rng(1, 1);
    for (int t = 0; t < 500; ++t) {
        const auto snap = exp3.propose(set);
        const auto p = snap.probabilities(set);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (double x : p) REQUIRE(x > 0.0);
        const auto arm = snap.sample(set, rng);
        exp3.observe(set, arm, arm == 2 ? 1.0 : 0.0);
    }
    const auto p = exp3.probabilities();
    CHECK(p[2] > p[0]);
}

TEST_CASE("non-finite rewards are rejected") {
    UcbLearner ucb(2);
    const ActionSet set(2);
    CHECK_THROWS_AS(ucb.observe(set, 0, std::numeric_limits<double>::quiet_NaN()), ContractViolation);
    CHECK_THROWS_AS(ucb.observe(set, 0, std::numeric_limits<double>::infinity()), ContractViolation);
    CHECK_THROWS_AS(ucb.observe(set, 5, 0.0), ContractViolation);
}

TEST_CASE("LinUCB rank-one update") {
    LinUcbLearner lin(2, {});
    const ActionSet set = ActionSet::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    lin.observe(set, 0, 0.5);
    CHECK(lin.gram()(0, 0) == 2.0);
    CHECK(lin.gram()(0, 1) == 0.0);
    CHECK(lin.gram()(1, 1) == 1.0);
    CHECK(lin.moment()(0) == 0.5);
    CHECK(lin.moment()(1) == 0.0);
    CHECK((lin.gram() * lin.gram_inverse() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("LinUCB width starts at beta_0 and shrinks along a repeated arm") {
    LinUcbOptions options;
    options.conf_delta = 0.01;
    LinUcbLearner lin(2, options);
    const std::vector<double> e0{1.0, 0.0};
    const double beta0 = 1.0 + std::sqrt(2.0 * std::log(100.0));
    CHECK(lin.beta() == doctest::Approx(beta0));
    CHECK(lin.width(e0) == doctest::Approx(beta0));
    const double w0 = lin.width(e0);
    const ActionSet set = ActionSet::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    for (int i = 0; i < 10000; ++i) lin.observe(set, 0, 0.3);
    CHECK(lin.width(e0) <= w0);
}

TEST_CASE("LinUCB misspecification widens the radius by eps sqrt(t)") {
    LinUcbOptions plain;
    LinUcbOptions wide;
    wide.misspec_eps = 0.1;
    LinUcbLearner a(2, plain);
    LinUcbLearner b(2, wide);
    const ActionSet set = ActionSet::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    for (int i = 0; i < 100; ++i) {
        a.observe(set, static_cast<std::size_t>(i % 2), 0.2);
        b.observe(set, static_cast<std::size_t>(i % 2), 0.2);
    }
    CHECK(b.beta() - a.beta() == doctest::Approx(1.0));
}

TEST_CASE("LinUCB confidence sets cover the true mean") {
    const double conf_delta = 0.05;
    std::size_t covered = 0;
    std::size_t total = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng setup(seed, streams::kEnvironmentSetup);
        auto env = LinearContextualEnv::sample(10, 2, ActionSetMode::kFixed, 1.0, setup);
        LinUcbOptions options;
        options.conf_delta = conf_delta;
        LinUcbLearner lin(2, options);
        EnvStreams streams{Rng(seed, streams::kActionSets), Rng(seed, streams::kRewardNoise)};
        Rng policy(seed, streams::kBaseFirst);
        for (int t = 0; t < 200; ++t) {
            const auto set = env.sample_action_set(streams.action_sets);
            const auto log = play_on_set(env, *set, streams.noise, lin.propose(*set), policy, 1);
            const auto a = set->arm_vector(log.arm);
            const Eigen::VectorXd theta = lin.theta_hat();
            const double estimate = theta(0) * a[0] + theta(1) * a[1];
            covered += std::abs(estimate - log.mean_reward) <= lin.width(a);
            ++total;
            lin.observe(*set, log.arm, log.reward);
        }
    }
    CHECK(static_cast<double>(covered) / static_cast<double>(total) >= 1.0 - 2.0 * conf_delta);
}

TEST_CASE("reset restores the initial learner") {
    LinUcbLearner lin(2, {});
    const ActionSet set = ActionSet::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    const auto fresh = lin.propose(set);
    lin.observe(set, 1, 0.7);
    lin.reset();
    CHECK(lin.propose(set) == fresh);
    CHECK(lin.rounds() == 0);
}

TEST_CASE("clone is an independent copy") {
    UcbLearner ucb(2);
    const ActionSet set(2);
    ucb.observe(set, 0, 1.0);
    auto copy = ucb.clone();
    copy->observe(set, 1, 1.0);
    CHECK(ucb.rounds() == 1);
    CHECK(copy->rounds() == 2);
}

TEST_CASE("UCB alone has sublinear regret on two Bernoulli arms") {
    KArmedEnv env({0.5, 0.45}, Noise::bernoulli());
    const std::size_t steps = 10000;
    std::vector<double> mean(steps, 0.0);
    const std::size_t seeds = 100;
    for (std::size_t s = 0; s < seeds; ++s) {
        UcbLearner ucb(2);
        const auto r = regret_alone(env, ucb, steps, 1000 + s);
        for (std::size_t t = 0; t < steps; ++t) mean[t] += r[t] / seeds;
    }
    CHECK(mean[steps - 1] / mean[steps / 2 - 1] < 1.9);
}

TEST_CASE("LinUCB beats UCB on linear arms and loses on nonlinear arms") {
    const std::size_t steps = 10000;
    const std::size_t seeds = 100;
    double lin_on_linear = 0.0;
    double ucb_on_linear = 0.0;
    double lin_on_nonlinear = 0.0;
    double ucb_on_nonlinear = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
        Rng setup(s, streams::kEnvironmentSetup);
        auto linear = LinearContextualEnv::sample(50, 2, ActionSetMode::kFixed, 1.0, setup);
        auto nonlinear = NonlinearArmsEnv::sample(50, 2, 10.0, 1.0, setup);
        LinUcbOptions options;
        options.conf_delta = 1.0 / steps;
        LinUcbLearner l1(2, options);
        LinUcbLearner l2(2, options);
        UcbLearner u1(50);
        UcbLearner u2(50);
        lin_on_linear += regret_alone(linear, l1, steps, s).back();
        ucb_on_linear += regret_alone(linear, u1, steps, s).back();
        lin_on_nonlinear += regret_alone(nonlinear, l2, steps, s).back();
        ucb_on_nonlinear += regret_alone(nonlinear, u2, steps, s).back();
    }
    CHECK(lin_on_linear < ucb_on_linear);
    CHECK(ucb_on_nonlinear < lin_on_nonlinear);
}

TEST_CASE("tuned epsilon-greedy beats both extremes") {
    KArmedEnv env({0.5, 0.45}, Noise::bernoulli());
    const std::size_t horizon = 10000;
    const std::size_t steps = 2 * horizon;  // environment steps of a T-round run
    const double tuned_c = 5.0 * 2.0 / (0.05 * 0.05);
    auto make = [](double c) { return [c] { return std::make_unique<EpsilonGreedyLearner>(2, c); }; };
    const double tuned = mean_final_regret(env, make(tuned_c), steps, 100, 500);
    const double tiny = mean_final_regret(env, make(1.0), steps, 100, 500);
    const double huge = mean_final_regret(env, make(2.0 * horizon), steps, 100, 500);
    MESSAGE("c=4000: " << tuned << "  c=1: " << tiny << "  c=2T: " << huge);
    CHECK(tuned < tiny);
    CHECK(tuned < huge);
}
