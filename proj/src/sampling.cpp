#include "corral/sampling.hpp"

#include "corral/errors.hpp"

namespace corral {

std::size_t sample_categorical(std::span<const double> probs, Rng& rng) {
    if (probs.empty()) throw ContractViolation("cannot sample from an empty distribution");
    const double u = rng.uniform01();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (probs[j] <= 0.0) continue;
        last_positive = j;
        cumulative += probs[j];
        if (u < cumulative) return j;
    }
    return last_positive;
}

}  // namespace corral
