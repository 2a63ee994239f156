#include "corral/environments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corral/errors.hpp"

namespace corral {

namespace {

std::vector<std::vector<double>> sample_unit_cube(std::size_t k, std::size_t d, Rng& rng) {
    std::vector<std::vector<double>> arms(k, std::vector<double>(d));
    for (auto& arm : arms)
        for (auto& x : arm) x = rng.uniform01();
    return arms;
}

}  // namespace

double Environment::draw_reward(const ActionSet& set, std::size_t arm, Rng& rng) const {
    if (!set.contains(arm)) throw ContractViolation("action " + std::to_string(arm) + " is not in the action set");
    const double mean = mean_reward(set, arm);
    const Noise n = noise();
    if (n.kind == Noise::Kind::kBernoulli) return rng.bernoulli(mean) ? 1.0 : 0.0;
    if (n.sigma == 0.0) return mean;
    return mean + n.sigma * rng.normal();
}

double Environment::per_step_optimum(const ActionSet& set) const {
    if (set.num_arms() == 0) throw ContractViolation("per-step optimum of an empty action set");
    double best = mean_reward(set, 0);
    for (std::size_t j = 1; j < set.num_arms(); ++j) best = std::max(best, mean_reward(set, j));
    return best;
}

// ---------------------------------------------------------------------------

KArmedEnv::KArmedEnv(std::vector<double> means, Noise noise) : means_(std::move(means)), noise_(noise) {
    if (means_.size() < 2) throw ContractViolation("k-armed environment needs at least two arms");
    for (double m : means_)
        if (!(m >= 0.0 && m <= 1.0)) throw ContractViolation("k-armed means must lie in [0,1]");
    if (noise_.kind == Noise::Kind::kGaussian && !(noise_.sigma >= 0.0))
        throw ContractViolation("noise sigma must be nonnegative");
    optimum_ = *std::max_element(means_.begin(), means_.end());
    arms_ = std::make_shared<const ActionSet>(means_.size());
}

ActionSetPtr KArmedEnv::sample_action_set(Rng&) const {
    return arms_;
}

double KArmedEnv::mean_reward(const ActionSet& set, std::size_t arm) const {
    if (!set.contains(arm) || arm >= means_.size()) throw ContractViolation("action is not in the action set");
    return means_[arm];
}

double KArmedEnv::per_step_optimum(const ActionSet& set) const {
    if (set.num_arms() == 0) throw ContractViolation("per-step optimum of an empty action set");
    return optimum_;
}

// ---------------------------------------------------------------------------

LinearContextualEnv::LinearContextualEnv(std::vector<double> theta, std::vector<std::vector<double>> arms,
                                         ActionSetMode mode, double noise_sigma)
    : theta_(std::move(theta)), k_(arms.size()), mode_(mode), noise_sigma_(noise_sigma) {
    if (theta_.empty()) throw ContractViolation("linear environment needs a positive dimension");
    if (k_ < 2) throw ContractViolation("linear environment needs at least two arms");
    double norm2 = 0.0;
    for (double x : theta_) norm2 += x * x;
    if (std::sqrt(norm2) > 1.0 + 1e-12) throw ContractViolation("theta_star must have norm at most 1");
    if (!(noise_sigma_ >= 0.0)) throw ContractViolation("noise sigma must be nonnegative");
    fixed_ = std::make_shared<const ActionSet>(ActionSet::from_rows(arms));
    if (fixed_->dim() != theta_.size()) throw ContractViolation("arm dimension does not match theta_star");
    refresh_fixed_optimum();
}

LinearContextualEnv LinearContextualEnv::sample(std::size_t k, std::size_t d, ActionSetMode mode,
                                                double noise_sigma, Rng& rng) {
    std::vector<double> theta(d);
    double norm2 = 0.0;
    for (auto& x : theta) {
        x = rng.uniform01();
        norm2 += x * x;
    }
    const double norm = std::sqrt(norm2);
    for (auto& x : theta) x = norm > 0.0 ? x / norm : 1.0 / std::sqrt(static_cast<double>(d));
    return LinearContextualEnv(std::move(theta), sample_unit_cube(k, d, rng), mode, noise_sigma);
}

void LinearContextualEnv::refresh_fixed_optimum() {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k_; ++j) best = std::max(best, linear_mean(*fixed_, j) + offset(j));
    fixed_optimum_ = best;
}

ActionSetPtr LinearContextualEnv::sample_action_set(Rng& rng) const {
    if (mode_ == ActionSetMode::kFixed) return fixed_;
    const std::size_t d = theta_.size();
    std::vector<double> columns(k_ * d);
    // Row-major draw order so a resampled set matches sample_unit_cube's sequence.
    for (std::size_t j = 0; j < k_; ++j)
        for (std::size_t i = 0; i < d; ++i) columns[i * k_ + j] = rng.uniform01();
    return std::make_shared<const ActionSet>(k_, d, std::move(columns));
}

double LinearContextualEnv::linear_mean(const ActionSet& set, std::size_t arm) const {
    double mean = 0.0;
    for (std::size_t i = 0; i < theta_.size(); ++i) mean += set.feature(arm, i) * theta_[i];
    return mean;
}

double LinearContextualEnv::mean_reward(const ActionSet& set, std::size_t arm) const {
    if (!set.contains(arm) || set.dim() != theta_.size()) throw ContractViolation("action is not in the action set");
    return linear_mean(set, arm) + offset(arm);
}

double LinearContextualEnv::per_step_optimum(const ActionSet& set) const {
    if (&set == fixed_.get()) return fixed_optimum_;
    return Environment::per_step_optimum(set);
}

// ---------------------------------------------------------------------------

MisspecifiedLinearEnv::MisspecifiedLinearEnv(LinearContextualEnv base, std::vector<double> perturbation,
                                             double eps_star)
    : LinearContextualEnv(std::move(base)), perturbation_(std::move(perturbation)), eps_star_(eps_star) {
    if (!(eps_star_ >= 0.0)) throw ContractViolation("eps_star must be nonnegative");
    if (perturbation_.size() != num_arms()) throw ContractViolation("one perturbation per arm is required");
    for (double e : perturbation_)
        if (!(std::abs(e) <= eps_star_)) throw ContractViolation("perturbation exceeds eps_star");
    refresh_fixed_optimum();
}

MisspecifiedLinearEnv MisspecifiedLinearEnv::sample(std::size_t k, std::size_t d, ActionSetMode mode,
                                                    double noise_sigma, double eps_star, Rng& rng) {
    LinearContextualEnv base = LinearContextualEnv::sample(k, d, mode, noise_sigma, rng);
    std::vector<double> perturbation(k);
    for (auto& e : perturbation) e = eps_star * (2.0 * rng.uniform01() - 1.0);
    return MisspecifiedLinearEnv(std::move(base), std::move(perturbation), eps_star);
}

// ---------------------------------------------------------------------------

NonlinearArmsEnv::NonlinearArmsEnv(std::vector<double> mu, std::vector<std::vector<double>> arms,
                                   double noise_sigma, double reward_scale)
    : mu_(std::move(mu)), noise_sigma_(noise_sigma), reward_scale_(reward_scale) {
    if (mu_.size() < 2) throw ContractViolation("nonlinear environment needs at least two arms");
    if (arms.size() != mu_.size()) throw ContractViolation("one feature vector per arm is required");
    if (!(noise_sigma_ >= 0.0)) throw ContractViolation("noise sigma must be nonnegative");
    if (!(reward_scale_ > 0.0)) throw ContractViolation("reward scale must be positive");
    arms_ = std::make_shared<const ActionSet>(ActionSet::from_rows(arms));
    optimum_ = *std::max_element(mu_.begin(), mu_.end());
}

NonlinearArmsEnv NonlinearArmsEnv::sample(std::size_t k, std::size_t d, double mu_max, double noise_sigma,
                                          Rng& rng) {
    auto arms = sample_unit_cube(k, d, rng);
    std::vector<double> mu(k);
    for (auto& m : mu) m = mu_max * rng.uniform01();
    return NonlinearArmsEnv(std::move(mu), std::move(arms), noise_sigma, mu_max);
}

ActionSetPtr NonlinearArmsEnv::sample_action_set(Rng&) const {
    return arms_;
}

double NonlinearArmsEnv::mean_reward(const ActionSet& set, std::size_t arm) const {
    if (!set.contains(arm) || arm >= mu_.size()) throw ContractViolation("action is not in the action set");
    return mu_[arm];
}

double NonlinearArmsEnv::per_step_optimum(const ActionSet& set) const {
    if (set.num_arms() == 0) throw ContractViolation("per-step optimum of an empty action set");
    return optimum_;
}

}  // namespace corral
