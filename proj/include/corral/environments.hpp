#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "corral/action_set.hpp"
#include "corral/rng.hpp"

namespace corral {

struct Noise {
    enum class Kind { kBernoulli, kGaussian };
    Kind kind = Kind::kGaussian;
    double sigma = 1.0;

    static Noise bernoulli() { return {Kind::kBernoulli, 0.0}; }
    static Noise gaussian(double sigma) { return {Kind::kGaussian, sigma}; }
};

enum class ActionSetMode { kFixed, kIidResample };

// Stochastic environment. Mean rewards are only used for regret accounting and are never
// handed to learners; learners see action sets and noisy rewards.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string name() const = 0;
    virtual std::size_t num_arms() const = 0;
    // Feature dimension; 0 for feature-less environments.
    virtual std::size_t dim() const = 0;

    virtual ActionSetPtr sample_action_set(Rng& rng) const = 0;
    virtual double mean_reward(const ActionSet& set, std::size_t arm) const = 0;

    // Mean plus noise. Throws ContractViolation when arm is not in the set.
    double draw_reward(const ActionSet& set, std::size_t arm, Rng& rng) const;

    // Best mean reward in the set. Throws ContractViolation on an empty set.
    virtual double per_step_optimum(const ActionSet& set) const;

    // Rewards divided by this factor lie (in mean) inside [0, 1]; masters and the
    // smoothing offsets work in that normalized unit.
    virtual double reward_scale() const { return 1.0; }

protected:
    virtual Noise noise() const = 0;
};

class KArmedEnv final : public Environment {
public:
    KArmedEnv(std::vector<double> means, Noise noise);

    std::string name() const override { return "k_armed"; }
    std::size_t num_arms() const override { return means_.size(); }
    std::size_t dim() const override { return 0; }
    ActionSetPtr sample_action_set(Rng& rng) const override;
    double mean_reward(const ActionSet& set, std::size_t arm) const override;
    double per_step_optimum(const ActionSet& set) const override;

    const std::vector<double>& means() const { return means_; }

protected:
    Noise noise() const override { return noise_; }

private:
    std::vector<double> means_;
    Noise noise_;
    double optimum_;
    ActionSetPtr arms_;
};

class LinearContextualEnv : public Environment {
public:
    // arms: k row vectors of length d. theta must have norm at most 1.
    LinearContextualEnv(std::vector<double> theta, std::vector<std::vector<double>> arms, ActionSetMode mode,
                        double noise_sigma);

    // theta and arms drawn uniformly from [0,1]^d; theta is then scaled to unit norm.
    static LinearContextualEnv sample(std::size_t k, std::size_t d, ActionSetMode mode, double noise_sigma, Rng& rng);

    std::string name() const override { return "linear"; }
    std::size_t num_arms() const override { return k_; }
    std::size_t dim() const override { return theta_.size(); }
    ActionSetPtr sample_action_set(Rng& rng) const override;
    double mean_reward(const ActionSet& set, std::size_t arm) const override;
    double per_step_optimum(const ActionSet& set) const override;

    const std::vector<double>& theta() const { return theta_; }
    ActionSetMode mode() const { return mode_; }
    double linear_mean(const ActionSet& set, std::size_t arm) const;

protected:
    Noise noise() const override { return Noise::gaussian(noise_sigma_); }

    // Added to the linear mean of arm slot j; zero for the well-specified model.
    virtual double offset(std::size_t /*arm*/) const { return 0.0; }
    void refresh_fixed_optimum();

private:
    std::vector<double> theta_;
    std::size_t k_;
    ActionSetMode mode_;
    double noise_sigma_;
    ActionSetPtr fixed_;
    double fixed_optimum_ = 0.0;
};

// Linear model plus per-arm deviations bounded by eps_star.
class MisspecifiedLinearEnv final : public LinearContextualEnv {
public:
    MisspecifiedLinearEnv(LinearContextualEnv base, std::vector<double> perturbation, double eps_star);

    // Perturbations drawn uniformly from [-eps_star, eps_star].
    static MisspecifiedLinearEnv sample(std::size_t k, std::size_t d, ActionSetMode mode, double noise_sigma,
                                        double eps_star, Rng& rng);

    std::string name() const override { return "misspecified_linear"; }
    double eps_star() const { return eps_star_; }
    const std::vector<double>& perturbation() const { return perturbation_; }

protected:
    double offset(std::size_t arm) const override { return perturbation_[arm]; }

private:
    std::vector<double> perturbation_;
    double eps_star_;
};

// Arm means unrelated to the (retained) arm features, so a linear model is wrong.
class NonlinearArmsEnv final : public Environment {
public:
    NonlinearArmsEnv(std::vector<double> mu, std::vector<std::vector<double>> arms, double noise_sigma,
                     double reward_scale);

    // mu uniform on [0, mu_max], features uniform on [0,1]^d.
    static NonlinearArmsEnv sample(std::size_t k, std::size_t d, double mu_max, double noise_sigma, Rng& rng);

    std::string name() const override { return "nonlinear"; }
    std::size_t num_arms() const override { return mu_.size(); }
    std::size_t dim() const override { return arms_->dim(); }
    ActionSetPtr sample_action_set(Rng& rng) const override;
    double mean_reward(const ActionSet& set, std::size_t arm) const override;
    double per_step_optimum(const ActionSet& set) const override;
    double reward_scale() const override { return reward_scale_; }

    const std::vector<double>& mu() const { return mu_; }

protected:
    Noise noise() const override { return Noise::gaussian(noise_sigma_); }

private:
    std::vector<double> mu_;
    ActionSetPtr arms_;
    double noise_sigma_;
    double reward_scale_;
    double optimum_;
};

}  // namespace corral
