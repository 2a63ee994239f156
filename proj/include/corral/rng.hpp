#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace corral {

// Philox4x32-10 counter-based generator. A stream is identified by (key, stream id);
// the 128-bit counter is split into a 64-bit block index and the 64-bit stream id,
// so distinct streams never overlap and any stream can be derived without advancing
// another one.
class Rng {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;

    Rng(std::uint64_t key, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform01();
    // Uniform on {0, ..., n-1}; n must be positive.
    std::size_t uniform_index(std::size_t n);
    double normal();
    bool bernoulli(double p);

    // Independent child stream; does not advance this generator.
    Rng split(std::uint64_t child) const;

    std::uint64_t key() const { return key_; }
    std::uint64_t stream() const { return stream_; }

    static Block philox(Block counter, std::array<std::uint32_t, 2> key);

private:
    void refill();

    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

// Deterministic 64-bit seed derived from (root, label, index).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t label, std::uint64_t index);

// Stream labels used inside a single run.
namespace streams {
inline constexpr std::uint64_t kEnvironmentSetup = 1;
inline constexpr std::uint64_t kActionSets = 2;
inline constexpr std::uint64_t kRewardNoise = 3;
inline constexpr std::uint64_t kMaster = 4;
inline constexpr std::uint64_t kAudit = 5;
inline constexpr std::uint64_t kRepetition = 6;
inline constexpr std::uint64_t kAuditNoise = 7;
inline constexpr std::uint64_t kBaselineRun = 8;
inline constexpr std::uint64_t kAuditPolicyFirst = 100000;
inline constexpr std::uint64_t kBaseFirst = 1000;
}  // namespace streams

}  // namespace corral
