#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "corral/bases.hpp"
#include "corral/bound.hpp"
#include "corral/environments.hpp"
#include "corral/policy.hpp"
#include "corral/rng.hpp"

namespace corral {

// Environment-side randomness owned by one run: action-set draws and reward noise.
struct EnvStreams {
    Rng action_sets;
    Rng noise;
};

// One environment step, in the environment's own (unscaled) reward units.
struct RoundLog {
    std::uint8_t step_kind = 1;  // 1 or 2
    std::size_t arm = 0;
    double reward = 0.0;
    double mean_reward = 0.0;
    double step_optimum = 0.0;

    double pseudo_regret() const { return step_optimum - mean_reward; }
};

// Samples an arm from the policy on a given set and draws its reward.
RoundLog play_on_set(const Environment& env, const ActionSet& set, Rng& noise, const PolicySnapshot& policy,
                     Rng& policy_rng, std::uint8_t step_kind);

// Same, on a freshly drawn action set.
RoundLog play_step(const Environment& env, EnvStreams& env_rng, const PolicySnapshot& policy, Rng& policy_rng,
                   std::uint8_t step_kind);

struct SmoothingOptions {
    // Draw a fresh replay index for every idle round instead of reusing the one
    // frozen at the last selection.
    bool resample_replay = false;
    // Added to the reported step-2 reward (normalized units). Nonzero only when
    // deliberately corrupting a base to exercise the drop test.
    double step2_reward_bias = 0.0;
};

enum class BaseVerdict { kKeep, kDrop };

// Two-step smoothing wrapper. Step 1 plays and trains the inner learner; step 2 replays
// a uniformly chosen past policy, and the master is paid the step-2 reward minus the
// bound offset U(s)/s.
class SmoothedBase {
public:
    struct SelectedOutcome {
        double modified_reward;  // normalized units, before clipping
        std::array<RoundLog, 2> steps;
    };

    SmoothedBase(std::unique_ptr<BaseAlgorithm> inner, BoundDescriptor bound, Rng rng, SmoothingOptions options = {});

    SmoothedBase(const SmoothedBase& other);
    SmoothedBase& operator=(const SmoothedBase&) = delete;
    SmoothedBase(SmoothedBase&&) noexcept = default;
    SmoothedBase& operator=(SmoothedBase&&) noexcept = default;

    // Throws ContractViolation when the base has been dropped.
    SelectedOutcome selected_round(const Environment& env, EnvStreams& env_rng);

    // Plays the frozen step-2 policy twice without touching learner statistics.
    std::array<RoundLog, 2> idle_round(const Environment& env, EnvStreams& env_rng);
    // Same, drawing the replay and the actions from policy_rng instead of the base's own stream.
    std::array<RoundLog, 2> idle_round(const Environment& env, EnvStreams& env_rng, Rng& policy_rng) const;

    BaseVerdict base_test(std::size_t horizon, std::size_t num_bases, double delta) const;
    double drop_threshold(std::size_t horizon, std::size_t num_bases, double delta) const;
    void drop() { dropped_ = true; }

    void restart();

    // Offset subtracted from the step-2 reward at state counter s.
    double offset(std::size_t s) const { return bound_.per_round(s); }

    std::size_t state_counter() const { return history_.size() - 1; }
    std::size_t select_count() const { return select_count_; }
    bool dropped() const { return dropped_; }
    double diff_stat() const { return diff_stat_; }
    const std::vector<PolicySnapshot>& policy_history() const { return history_; }
    const PolicySnapshot& frozen_step2() const { return history_[frozen_index_]; }
    std::size_t frozen_index() const { return frozen_index_; }
    const BoundDescriptor& bound() const { return bound_; }
    const BaseAlgorithm& inner() const { return *inner_; }

private:
    std::unique_ptr<BaseAlgorithm> inner_;
    BoundDescriptor bound_;
    Rng rng_;
    SmoothingOptions options_;
    std::vector<PolicySnapshot> history_;
    std::size_t frozen_index_ = 0;
    std::size_t select_count_ = 0;
    double diff_stat_ = 0.0;
    bool dropped_ = false;
};

}  // namespace corral
