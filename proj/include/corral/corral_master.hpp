#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corral/rng.hpp"

namespace corral {

struct OmdResult {
    std::vector<double> probs;
    double lambda = 0.0;
    // sum_j 1/(1/p_j + eta_j (loss_j - lambda)) - 1 at the returned lambda
    double residual = 0.0;
    int iterations = 0;
};

// One log-barrier mirror-descent step: finds lambda in [min loss, max loss] with
// sum_j 1/(1/p_j + eta_j (loss_j - lambda)) = 1 by bisection and returns
// p'_j = 1/(1/p_j + eta_j (loss_j - lambda)).
// Throws ContractViolation for a non-simplex p, mismatched sizes or nonpositive eta.
OmdResult log_barrier_omd(std::span<const double> probs, std::span<const double> loss, std::span<const double> eta);

struct RestartEvent {
    std::size_t round;
    std::size_t base;
};

// CORRAL master: log-barrier OMD on importance-weighted losses, gamma = 1/T mixing,
// and per-base probability floors that halve (raising that base's learning rate by
// beta = e^{1/ln T}) whenever the base's probability drops below its floor.
class CorralMaster {
public:
    CorralMaster(std::size_t num_bases, double eta, std::size_t horizon);

    std::size_t sample(Rng& rng) const;

    // loss in [0, 1] for the chosen base. Returns the bases whose floor was halved;
    // the caller restarts them.
    std::vector<std::size_t> update(std::size_t chosen, double loss);

    std::size_t num_bases() const { return probs_.size(); }
    const std::vector<double>& probabilities() const { return probs_; }
    const std::vector<double>& learning_rates() const { return eta_; }
    const std::vector<double>& floors() const { return floor_; }
    double gamma() const { return gamma_; }
    double beta() const { return beta_; }
    std::size_t round() const { return round_; }
    const std::vector<RestartEvent>& restart_events() const { return restarts_; }
    const std::vector<std::size_t>& restart_counts() const { return restart_counts_; }

    // ceil(log2 T) + ceil(log2 2M)
    std::size_t restart_cap() const;

private:
    std::vector<double> probs_;
    std::vector<double> eta_;
    std::vector<double> floor_;
    double gamma_;
    double beta_;
    std::size_t horizon_;
    std::size_t round_ = 0;
    std::vector<RestartEvent> restarts_;
    std::vector<std::size_t> restart_counts_;
    std::vector<double> loss_scratch_;
};

}  // namespace corral
