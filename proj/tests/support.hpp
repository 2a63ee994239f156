#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "corral/bases.hpp"
#include "corral/environments.hpp"
#include "corral/smoothing.hpp"

namespace corral::testing {

// Cumulative pseudo-regret after each of `steps` plays of a raw learner.
inline std::vector<double> regret_alone(const Environment& env, BaseAlgorithm& learner, std::size_t steps,
                                        std::uint64_t seed) {
    EnvStreams streams{Rng(seed, streams::kActionSets), Rng(seed, streams::kRewardNoise)};
    Rng policy(seed, streams::kBaseFirst);
    std::vector<double> out;
    out.reserve(steps);
    double total = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        const auto set = env.sample_action_set(streams.action_sets);
        const RoundLog log = play_on_set(env, *set, streams.noise, learner.propose(*set), policy, 1);
        learner.observe(*set, log.arm, log.reward);
        total += log.pseudo_regret();
        out.push_back(total);
    }
    return out;
}

template <class Make>
double mean_final_regret(const Environment& env, Make make, std::size_t steps, std::size_t seeds,
                         std::uint64_t base_seed) {
    double sum = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
        auto learner = make();
        sum += regret_alone(env, *learner, steps, base_seed + s).back();
    }
    return sum / static_cast<double>(seeds);
}

}  // namespace corral::testing
