#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "corral/rng.hpp"

namespace corral {

// EXP3.P master with exploration floor p: gain estimates (r 1{j chosen} + p/2) / p_j,
// probabilities (1 - M p) softmax(cumulative gains) + p.
class Exp3pMaster {
public:
    // Throws ContractViolation unless 0 < p_explore <= 1/(2M).
    Exp3pMaster(std::size_t num_bases, double p_explore);

    // T^{-(1-a)/(2-a)} M^{-1/(2-a)} for a known bound exponent a, else T^{-1/3};
    // capped at 1/(2M).
    static double default_exploration(std::size_t horizon, std::size_t num_bases, std::optional<double> alpha);

    std::size_t sample(Rng& rng) const;
    // reward in [0, 1] for the chosen base.
    void update(std::size_t chosen, double reward);

    std::size_t num_bases() const { return probs_.size(); }
    double exploration() const { return p_explore_; }
    const std::vector<double>& probabilities() const { return probs_; }
    const std::vector<double>& cumulative_gains() const { return cum_gain_; }

private:
    double p_explore_;
    std::vector<double> probs_;
    std::vector<double> cum_gain_;
};

}  // namespace corral
