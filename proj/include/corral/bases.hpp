#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corral/action_set.hpp"
#include "corral/bound.hpp"
#include "corral/policy.hpp"

namespace corral {

// Stochastic base learner. propose() is pure: it reads the learner statistics and
// returns a snapshot; only observe() and reset() change state.
class BaseAlgorithm {
public:
    virtual ~BaseAlgorithm() = default;

    virtual BaseKind kind() const = 0;
    virtual std::string label() const = 0;
    virtual std::unique_ptr<BaseAlgorithm> clone() const = 0;

    virtual PolicySnapshot propose(const ActionSet& set) const = 0;
    // Throws ContractViolation for a non-finite reward or an arm outside the set.
    virtual void observe(const ActionSet& set, std::size_t arm, double reward) = 0;
    // Back to the initial learner state.
    virtual void reset() = 0;

    std::size_t rounds() const { return t_; }

protected:
    void check_observation(const ActionSet& set, std::size_t arm, double reward) const;
    std::size_t t_ = 0;
};

// Shared empirical-mean bookkeeping for k-armed learners.
class ArmStatistics {
public:
    explicit ArmStatistics(std::size_t k) : counts_(k, 0.0), sums_(k, 0.0) {}

    void add(std::size_t arm, double reward) {
        counts_[arm] += 1.0;
        sums_[arm] += reward;
    }
    void clear();

    std::size_t num_arms() const { return counts_.size(); }
    double count(std::size_t arm) const { return counts_[arm]; }
    double sum(std::size_t arm) const { return sums_[arm]; }
    const std::vector<double>& counts() const { return counts_; }
    const std::vector<double>& sums() const { return sums_; }

    // Highest empirical mean, unpulled arms first, lowest index on ties.
    std::size_t greedy_arm() const;

private:
    std::vector<double> counts_;
    std::vector<double> sums_;
};

class UcbLearner final : public BaseAlgorithm {
public:
    explicit UcbLearner(std::size_t k);

    BaseKind kind() const override { return BaseKind::kUcb; }
    std::string label() const override { return "ucb"; }
    std::unique_ptr<BaseAlgorithm> clone() const override { return std::make_unique<UcbLearner>(*this); }
    PolicySnapshot propose(const ActionSet& set) const override;
    void observe(const ActionSet& set, std::size_t arm, double reward) override;
    void reset() override;

    // mean + sqrt(2 ln(t^3) / n), +inf for an unpulled arm.
    double index(std::size_t arm) const;
    const ArmStatistics& stats() const { return stats_; }

private:
    double bonus_numerator() const;

    ArmStatistics stats_;
    mutable std::vector<double> scratch_;
};

struct LinUcbOptions {
    double reg_lambda = 1.0;
    double conf_delta = 0.01;
    double norm_bound = 1.0;
    // Widens the confidence radius by eps * sqrt(t) for misspecified models.
    double misspec_eps = 0.0;
};

class LinUcbLearner final : public BaseAlgorithm {
public:
    LinUcbLearner(std::size_t d, LinUcbOptions options);

    BaseKind kind() const override { return BaseKind::kLinUcb; }
    std::string label() const override;
    std::unique_ptr<BaseAlgorithm> clone() const override { return std::make_unique<LinUcbLearner>(*this); }
    PolicySnapshot propose(const ActionSet& set) const override;
    void observe(const ActionSet& set, std::size_t arm, double reward) override;
    void reset() override;

    double beta() const;
    // beta_t * ||a||_{V^-1}
    double width(const std::vector<double>& action) const;
    Eigen::VectorXd theta_hat() const { return vinv_ * moment_; }

    const Eigen::MatrixXd& gram() const { return gram_; }
    const Eigen::VectorXd& moment() const { return moment_; }
    const Eigen::MatrixXd& gram_inverse() const { return vinv_; }
    const LinUcbOptions& options() const { return options_; }

private:
    std::size_t d_;
    LinUcbOptions options_;
    Eigen::MatrixXd gram_;
    Eigen::MatrixXd vinv_;
    Eigen::VectorXd moment_;
};

class EpsilonGreedyLearner final : public BaseAlgorithm {
public:
    EpsilonGreedyLearner(std::size_t k, double c);

    BaseKind kind() const override { return BaseKind::kEpsilonGreedy; }
    std::string label() const override;
    std::unique_ptr<BaseAlgorithm> clone() const override { return std::make_unique<EpsilonGreedyLearner>(*this); }
    PolicySnapshot propose(const ActionSet& set) const override;
    void observe(const ActionSet& set, std::size_t arm, double reward) override;
    void reset() override;

    // min(1, c/t), and 1 before the first observation.
    double epsilon() const;
    double c() const { return c_; }
    const ArmStatistics& stats() const { return stats_; }

private:
    ArmStatistics stats_;
    double c_;
};

// Anytime EXP3 with learning rate sqrt(ln k / (t k)) and uniform mixing 1/sqrt(t k).
// Rewards are clipped to [0,1] before importance weighting.
class Exp3Learner final : public BaseAlgorithm {
public:
    explicit Exp3Learner(std::size_t k);

    BaseKind kind() const override { return BaseKind::kExp3; }
    std::string label() const override { return "exp3"; }
    std::unique_ptr<BaseAlgorithm> clone() const override { return std::make_unique<Exp3Learner>(*this); }
    PolicySnapshot propose(const ActionSet& set) const override;
    void observe(const ActionSet& set, std::size_t arm, double reward) override;
    void reset() override;

    std::vector<double> probabilities() const;
    const std::vector<double>& gains() const { return gains_; }

private:
    std::vector<double> gains_;
};

}  // namespace corral
