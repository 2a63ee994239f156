#include "corral/bases.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "corral/errors.hpp"
#include "corral/kernels/kernels.hpp"

namespace corral {

namespace {

std::string format_param(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

void require_arms(const ActionSet& set, std::size_t k) {
    if (set.num_arms() != k)
        throw ContractViolation("learner built for " + std::to_string(k) + " arms got a set of " +
                                std::to_string(set.num_arms()));
}

}  // namespace

void BaseAlgorithm::check_observation(const ActionSet& set, std::size_t arm, double reward) const {
    if (!std::isfinite(reward)) throw ContractViolation("reward must be finite");
    if (!set.contains(arm)) throw ContractViolation("observed arm is not in the action set");
}

// ---------------------------------------------------------------------------

void ArmStatistics::clear() {
    std::fill(counts_.begin(), counts_.end(), 0.0);
    std::fill(sums_.begin(), sums_.end(), 0.0);
}

std::size_t ArmStatistics::greedy_arm() const {
    std::size_t best = 0;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < counts_.size(); ++j) {
        const double mean = counts_[j] == 0.0 ? std::numeric_limits<double>::infinity() : sums_[j] / counts_[j];
        if (mean > best_mean) {
            best_mean = mean;
            best = j;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

UcbLearner::UcbLearner(std::size_t k) : stats_(k), scratch_(k) {
    if (k == 0) throw ContractViolation("UCB needs at least one arm");
}

double UcbLearner::bonus_numerator() const {
    // 2 ln(t^3)
    return t_ >= 1 ? 6.0 * std::log(static_cast<double>(t_)) : 0.0;
}

double UcbLearner::index(std::size_t arm) const {
    const double n = stats_.count(arm);
    if (n == 0.0) return std::numeric_limits<double>::infinity();
    return stats_.sum(arm) / n + std::sqrt(bonus_numerator() / n);
}

PolicySnapshot UcbLearner::propose(const ActionSet& set) const {
    require_arms(set, stats_.num_arms());
    kernels::active_kernels().ucb_indices(stats_.sums().data(), stats_.counts().data(), stats_.num_arms(),
                                          bonus_numerator(), scratch_.data());
    return PolicySnapshot(PolicySnapshot::PointMass{kernels::argmax_lowest(scratch_.data(), scratch_.size())});
}

void UcbLearner::observe(const ActionSet& set, std::size_t arm, double reward) {
    check_observation(set, arm, reward);
    stats_.add(arm, reward);
    ++t_;
}

void UcbLearner::reset() {
    stats_.clear();
    t_ = 0;
}

// ---------------------------------------------------------------------------

LinUcbLearner::LinUcbLearner(std::size_t d, LinUcbOptions options) : d_(d), options_(options) {
    if (d == 0) throw ContractViolation("LinUCB needs a positive feature dimension");
    if (!(options_.reg_lambda > 0.0)) throw ContractViolation("LinUCB regularizer must be positive");
    if (!(options_.conf_delta > 0.0 && options_.conf_delta < 1.0))
        throw ContractViolation("LinUCB confidence delta must lie in (0,1)");
    if (!(options_.misspec_eps >= 0.0)) throw ContractViolation("misspecification width must be nonnegative");
    reset();
}

std::string LinUcbLearner::label() const {
    if (options_.misspec_eps > 0.0) return "linucb(eps=" + format_param(options_.misspec_eps) + ")";
    return "linucb";
}

void LinUcbLearner::reset() {
    gram_ = options_.reg_lambda * Eigen::MatrixXd::Identity(d_, d_);
    vinv_ = Eigen::MatrixXd::Identity(d_, d_) / options_.reg_lambda;
    moment_ = Eigen::VectorXd::Zero(d_);
    t_ = 0;
}

double LinUcbLearner::beta() const {
    const double d = static_cast<double>(d_);
    const double t = static_cast<double>(t_);
    const double lambda = options_.reg_lambda;
    return std::sqrt(lambda) * options_.norm_bound +
           std::sqrt(2.0 * std::log(1.0 / options_.conf_delta) + d * std::log(1.0 + t / (lambda * d))) +
           options_.misspec_eps * std::sqrt(t);
}

double LinUcbLearner::width(const std::vector<double>& action) const {
    if (action.size() != d_) throw ContractViolation("action dimension mismatch");
    const Eigen::Map<const Eigen::VectorXd> a(action.data(), static_cast<Eigen::Index>(d_));
    const double quad = a.dot(vinv_ * a);
    if (!(quad > 0.0) && a.squaredNorm() > 0.0) throw InvariantViolation("LinUCB Gram inverse lost positive definiteness");
    return beta() * std::sqrt(std::max(quad, 0.0));
}

PolicySnapshot LinUcbLearner::propose(const ActionSet& set) const {
    if (set.dim() != d_) throw ContractViolation("LinUCB played on a set of another dimension");
    const Eigen::VectorXd theta = theta_hat();
    PolicySnapshot::LinearOptimistic rule{std::vector<double>(theta.data(), theta.data() + d_),
                                          std::vector<double>(d_ * d_), beta()};
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t l = 0; l < d_; ++l)
            rule.vinv[i * d_ + l] = vinv_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
    return PolicySnapshot(std::move(rule));
}

void LinUcbLearner::observe(const ActionSet& set, std::size_t arm, double reward) {
    check_observation(set, arm, reward);
    if (set.dim() != d_) throw ContractViolation("LinUCB observed an action of another dimension");
    Eigen::VectorXd a(d_);
    for (std::size_t i = 0; i < d_; ++i) a[static_cast<Eigen::Index>(i)] = set.feature(arm, i);
    gram_ += a * a.transpose();
    moment_ += reward * a;
    // Sherman-Morrison rank-one update of V^-1.
    const Eigen::VectorXd u = vinv_ * a;
    const double denom = 1.0 + a.dot(u);
    if (!(denom > 0.0)) throw InvariantViolation("LinUCB Gram matrix became singular");
    vinv_ -= (u * u.transpose()) / denom;
    ++t_;
}

// ---------------------------------------------------------------------------

EpsilonGreedyLearner::EpsilonGreedyLearner(std::size_t k, double c) : stats_(k), c_(c) {
    if (k == 0) throw ContractViolation("epsilon-greedy needs at least one arm");
    if (!(c > 0.0)) throw ContractViolation("epsilon-greedy exploration scale must be positive");
}

std::string EpsilonGreedyLearner::label() const {
    return "egreedy(c=" + format_param(c_) + ")";
}

double EpsilonGreedyLearner::epsilon() const {
    if (t_ == 0) return 1.0;
    return std::min(1.0, c_ / static_cast<double>(t_));
}

PolicySnapshot EpsilonGreedyLearner::propose(const ActionSet& set) const {
    require_arms(set, stats_.num_arms());
    return PolicySnapshot(PolicySnapshot::EpsilonGreedy{stats_.greedy_arm(), epsilon()});
}

void EpsilonGreedyLearner::observe(const ActionSet& set, std::size_t arm, double reward) {
    check_observation(set, arm, reward);
    stats_.add(arm, reward);
    ++t_;
}

void EpsilonGreedyLearner::reset() {
    stats_.clear();
    t_ = 0;
}

// ---------------------------------------------------------------------------

Exp3Learner::Exp3Learner(std::size_t k) : gains_(k, 0.0) {
    if (k == 0) throw ContractViolation("EXP3 needs at least one arm");
}

std::vector<double> Exp3Learner::probabilities() const {
    const std::size_t k = gains_.size();
    const double kd = static_cast<double>(k);
    std::vector<double> p(k, 1.0 / kd);
    if (t_ == 0 || k == 1) return p;
    const double t = static_cast<double>(t_);
    const double eta = std::sqrt(std::log(kd) / (t * kd));
    const double mix = std::min(1.0, 1.0 / std::sqrt(t * kd));
    const double top = *std::max_element(gains_.begin(), gains_.end());
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        p[j] = std::exp(eta * (gains_[j] - top));
        total += p[j];
    }
    for (auto& x : p) x = (1.0 - mix) * (x / total) + mix / kd;
    return p;
}

PolicySnapshot Exp3Learner::propose(const ActionSet& set) const {
    require_arms(set, gains_.size());
    return PolicySnapshot(PolicySnapshot::Categorical{probabilities()});
}

void Exp3Learner::observe(const ActionSet& set, std::size_t arm, double reward) {
    check_observation(set, arm, reward);
    const std::vector<double> p = probabilities();
    gains_[arm] += std::clamp(reward, 0.0, 1.0) / p[arm];
    ++t_;
}

void Exp3Learner::reset() {
    std::fill(gains_.begin(), gains_.end(), 0.0);
    t_ = 0;
}

}  // namespace corral
