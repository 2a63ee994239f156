#include "corral/rng.hpp"

#include <cmath>
#include <numbers>

namespace corral {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Rng::Rng(std::uint64_t key, std::uint64_t stream) : key_(key), stream_(stream) {}

Rng::Block Rng::philox(Block ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

void Rng::refill() {
    const Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                    static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const Block out = philox(ctr, {static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)});
    ++block_;
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    buffered_ = 2;
}

Rng::result_type Rng::operator()() {
    if (buffered_ == 0) refill();
    return buffer_[2 - buffered_--];
}

double Rng::uniform01() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
    // Lemire's nearly-divisionless bounded draw.
    const std::uint64_t range = n;
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            m = static_cast<unsigned __int128>((*this)()) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

double Rng::normal() {
    // Box-Muller, one variate per call.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

bool Rng::bernoulli(double p) {
    return uniform01() < p;
}

Rng Rng::split(std::uint64_t child) const {
    return Rng(derive_seed(key_, stream_, child), child);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t label, std::uint64_t index) {
    const Rng::Block ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                         static_cast<std::uint32_t>(label), static_cast<std::uint32_t>(label >> 32)};
    // Domain-separate from ordinary draws by flipping the key.
    const std::uint64_t key = ~root;
    const Rng::Block out =
        Rng::philox(ctr, {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)});
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace corral
