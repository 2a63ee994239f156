#pragma once

#include <cstddef>
#include <string>

namespace corral {

enum class BaseKind { kUcb, kLinUcb, kEpsilonGreedy, kExp3 };

std::string to_string(BaseKind kind);
BaseKind parse_base_kind(const std::string& name);

// High-probability regret bound U(t) = coeff * t^alpha at the run's fixed delta.
class BoundDescriptor {
public:
    BoundDescriptor(double alpha, double coeff);

    double alpha() const { return alpha_; }
    double coeff() const { return coeff_; }

    double value(double t) const;
    // U(s)/s, with s = 0 treated as s = 1.
    double per_round(std::size_t s) const;

private:
    double alpha_;
    double coeff_;
};

// Bound shape for a base learner; k arms, d feature dimension, confidence delta, horizon T.
BoundDescriptor bound_descriptor(BaseKind kind, std::size_t k, std::size_t d, double delta, std::size_t horizon);

}  // namespace corral
