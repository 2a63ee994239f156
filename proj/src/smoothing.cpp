#include "corral/smoothing.hpp"

#include <cmath>

#include "corral/errors.hpp"

namespace corral {

RoundLog play_on_set(const Environment& env, const ActionSet& set, Rng& noise, const PolicySnapshot& policy,
                     Rng& policy_rng, std::uint8_t step_kind) {
    RoundLog log;
    log.step_kind = step_kind;
    log.arm = policy.sample(set, policy_rng);
    log.reward = env.draw_reward(set, log.arm, noise);
    log.mean_reward = env.mean_reward(set, log.arm);
    log.step_optimum = env.per_step_optimum(set);
    return log;
}

RoundLog play_step(const Environment& env, EnvStreams& env_rng, const PolicySnapshot& policy, Rng& policy_rng,
                   std::uint8_t step_kind) {
    const ActionSetPtr set = env.sample_action_set(env_rng.action_sets);
    return play_on_set(env, *set, env_rng.noise, policy, policy_rng, step_kind);
}

SmoothedBase::SmoothedBase(std::unique_ptr<BaseAlgorithm> inner, BoundDescriptor bound, Rng rng,
                           SmoothingOptions options)
    : inner_(std::move(inner)), bound_(bound), rng_(rng), options_(options), history_{PolicySnapshot::uniform()} {
    if (!inner_) throw ContractViolation("smoothed base needs an inner learner");
}

SmoothedBase::SmoothedBase(const SmoothedBase& other)
    : inner_(other.inner_->clone()),
      bound_(other.bound_),
      rng_(other.rng_),
      options_(other.options_),
      history_(other.history_),
      frozen_index_(other.frozen_index_),
      select_count_(other.select_count_),
      diff_stat_(other.diff_stat_),
      dropped_(other.dropped_) {}

SmoothedBase::SelectedOutcome SmoothedBase::selected_round(const Environment& env, EnvStreams& env_rng) {
    if (dropped_) throw ContractViolation("a dropped base cannot be selected");
    const std::size_t s = state_counter();
    const double scale = env.reward_scale();

    // Step 1: current policy, and the learner trains on the outcome. For s >= 1 the
    // newest history entry is exactly the learner's current proposal.
    const ActionSetPtr set1 = env.sample_action_set(env_rng.action_sets);
    SelectedOutcome out{};
    if (s == 0) {
        out.steps[0] = play_on_set(env, *set1, env_rng.noise, inner_->propose(*set1), rng_, 1);
    } else {
        out.steps[0] = play_on_set(env, *set1, env_rng.noise, history_.back(), rng_, 1);
    }
    inner_->observe(*set1, out.steps[0].arm, out.steps[0].reward);

    // Step 2: replay pi_q with q uniform on {0, ..., s}.
    frozen_index_ = rng_.uniform_index(s + 1);
    out.steps[1] = play_step(env, env_rng, history_[frozen_index_], rng_, 2);

    const double r1 = out.steps[0].reward / scale;
    const double r2 = out.steps[1].reward / scale + options_.step2_reward_bias;
    diff_stat_ += r2 - r1;
    out.modified_reward = r2 - offset(s);

    ++select_count_;
    history_.push_back(inner_->propose(*set1));
    return out;
}

std::array<RoundLog, 2> SmoothedBase::idle_round(const Environment& env, EnvStreams& env_rng) {
    std::array<RoundLog, 2> logs{};
    for (std::uint8_t step = 0; step < 2; ++step) {
        if (options_.resample_replay) frozen_index_ = rng_.uniform_index(history_.size());
        logs[step] = play_step(env, env_rng, history_[frozen_index_], rng_, static_cast<std::uint8_t>(step + 1));
    }
    return logs;
}

std::array<RoundLog, 2> SmoothedBase::idle_round(const Environment& env, EnvStreams& env_rng, Rng& policy_rng) const {
    std::array<RoundLog, 2> logs{};
    for (std::uint8_t step = 0; step < 2; ++step) {
        const std::size_t q = options_.resample_replay ? policy_rng.uniform_index(history_.size()) : frozen_index_;
        logs[step] = play_step(env, env_rng, history_[q], policy_rng, static_cast<std::uint8_t>(step + 1));
    }
    return logs;
}

double SmoothedBase::drop_threshold(std::size_t horizon, std::size_t num_bases, double delta) const {
    const double l = static_cast<double>(select_count_);
    const double log_term = std::log(4.0 * static_cast<double>(horizon) * static_cast<double>(num_bases) / delta);
    return bound_.value(l) + 2.0 * std::sqrt(2.0 * l * log_term);
}

BaseVerdict SmoothedBase::base_test(std::size_t horizon, std::size_t num_bases, double delta) const {
    if (select_count_ == 0) return BaseVerdict::kKeep;
    return diff_stat_ > drop_threshold(horizon, num_bases, delta) ? BaseVerdict::kDrop : BaseVerdict::kKeep;
}

void SmoothedBase::restart() {
    inner_->reset();
    history_.assign(1, PolicySnapshot::uniform());
    frozen_index_ = 0;
    select_count_ = 0;
    diff_stat_ = 0.0;
}

}  // namespace corral
