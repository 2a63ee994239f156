#include "corral/exp3p_master.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "corral/errors.hpp"
#include "corral/sampling.hpp"

namespace corral {

Exp3pMaster::Exp3pMaster(std::size_t num_bases, double p_explore)
    : p_explore_(p_explore), probs_(num_bases), cum_gain_(num_bases, 0.0) {
    if (num_bases == 0) throw ContractViolation("EXP3.P needs at least one base");
    const double m = static_cast<double>(num_bases);
    if (num_bases > 1 && !(p_explore > 0.0 && p_explore <= 1.0 / (2.0 * m)))
        throw ContractViolation("EXP3.P exploration must lie in (0, 1/(2M)], got " + std::to_string(p_explore));
    std::fill(probs_.begin(), probs_.end(), 1.0 / m);
}

double Exp3pMaster::default_exploration(std::size_t horizon, std::size_t num_bases, std::optional<double> alpha) {
    const double t = static_cast<double>(horizon);
    const double m = static_cast<double>(num_bases);
    double p = alpha ? std::pow(t, -(1.0 - *alpha) / (2.0 - *alpha)) * std::pow(m, -1.0 / (2.0 - *alpha))
                     : std::cbrt(1.0 / t);
    return std::min(p, 1.0 / (2.0 * m));
}

std::size_t Exp3pMaster::sample(Rng& rng) const {
    return sample_categorical(probs_, rng);
}

void Exp3pMaster::update(std::size_t chosen, double reward) {
    const std::size_t m = num_bases();
    if (chosen >= m) throw ContractViolation("chosen base index " + std::to_string(chosen) + " out of range");
    if (!(reward >= 0.0 && reward <= 1.0)) throw ContractViolation("EXP3.P reward must lie in [0,1]");
    for (std::size_t j = 0; j < m; ++j) {
        const double hit = j == chosen ? reward : 0.0;
        cum_gain_[j] += (hit + p_explore_ / 2.0) / probs_[j];
    }
    const double top = *std::max_element(cum_gain_.begin(), cum_gain_.end());
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        probs_[j] = std::exp(cum_gain_[j] - top);
        total += probs_[j];
    }
    const double spread = 1.0 - static_cast<double>(m) * p_explore_;
    for (auto& p : probs_) p = spread * (p / total) + p_explore_;
}

}  // namespace corral
