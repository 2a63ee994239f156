#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "corral/action_set.hpp"
#include "corral/rng.hpp"

namespace corral {

// Immutable sampling rule captured from a learner. It is evaluated on whatever action
// set it is played against, so a snapshot taken in one round can be replayed on a
// freshly drawn set later.
class PolicySnapshot {
public:
    struct Uniform {
        bool operator==(const Uniform&) const = default;
    };
    struct PointMass {
        std::size_t arm;
        bool operator==(const PointMass&) const = default;
    };
    // Uniform exploration with probability epsilon, otherwise the greedy arm.
    struct EpsilonGreedy {
        std::size_t greedy_arm;
        double epsilon;
        bool operator==(const EpsilonGreedy&) const = default;
    };
    struct Categorical {
        std::vector<double> probs;
        bool operator==(const Categorical&) const = default;
    };
    // argmax_a <a, theta> + beta * ||a||_{V^-1}, lowest index on ties.
    struct LinearOptimistic {
        std::vector<double> theta;
        std::vector<double> vinv;
        double beta;
        bool operator==(const LinearOptimistic&) const = default;
    };
    using Rule = std::variant<Uniform, PointMass, EpsilonGreedy, Categorical, LinearOptimistic>;

    PolicySnapshot() : rule_(Uniform{}) {}
    explicit PolicySnapshot(Rule rule) : rule_(std::move(rule)) {}

    static PolicySnapshot uniform() { return PolicySnapshot(Uniform{}); }

    const Rule& rule() const { return rule_; }

    std::vector<double> probabilities(const ActionSet& set) const;
    std::size_t sample(const ActionSet& set, Rng& rng) const;

    bool operator==(const PolicySnapshot&) const = default;

private:
    Rule rule_;
};

}  // namespace corral
