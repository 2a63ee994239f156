#pragma once

#include <cstddef>
#include <span>

#include "corral/rng.hpp"

namespace corral {

// Categorical draw by inverse CDF. Entries must be nonnegative; the last index with
// positive mass absorbs rounding in the cumulative sum.
std::size_t sample_categorical(std::span<const double> probs, Rng& rng);

}  // namespace corral
