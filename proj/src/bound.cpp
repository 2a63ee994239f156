#include "corral/bound.hpp"

#include <cmath>

#include "corral/errors.hpp"

namespace corral {

std::string to_string(BaseKind kind) {
    switch (kind) {
        case BaseKind::kUcb: return "ucb";
        case BaseKind::kLinUcb: return "linucb";
        case BaseKind::kEpsilonGreedy: return "egreedy";
        case BaseKind::kExp3: return "exp3";
    }
    return "unknown";
}

BaseKind parse_base_kind(const std::string& name) {
    if (name == "ucb") return BaseKind::kUcb;
    if (name == "linucb") return BaseKind::kLinUcb;
    if (name == "egreedy") return BaseKind::kEpsilonGreedy;
    if (name == "exp3") return BaseKind::kExp3;
    throw ConfigError("unknown base kind '" + name + "'");
}

BoundDescriptor::BoundDescriptor(double alpha, double coeff) : alpha_(alpha), coeff_(coeff) {
    if (!(alpha >= 0.5 && alpha < 1.0)) throw ContractViolation("bound exponent alpha must lie in [1/2, 1)");
    if (!(coeff >= 0.0) || !std::isfinite(coeff)) throw ContractViolation("bound coefficient must be finite and >= 0");
}

double BoundDescriptor::value(double t) const {
    return coeff_ * std::pow(t, alpha_);
}

double BoundDescriptor::per_round(std::size_t s) const {
    const double t = s == 0 ? 1.0 : static_cast<double>(s);
    return coeff_ * std::pow(t, alpha_ - 1.0);
}

BoundDescriptor bound_descriptor(BaseKind kind, std::size_t k, std::size_t d, double delta, std::size_t horizon) {
    if (k == 0 || !(delta > 0.0 && delta < 1.0) || horizon == 0)
        throw ContractViolation("bound parameters must be positive with delta in (0,1)");
    const double kd = static_cast<double>(k);
    const double log_inv_delta = std::log(1.0 / delta);
    switch (kind) {
        case BaseKind::kUcb:
        case BaseKind::kExp3:
            return {0.5, std::sqrt(kd) * std::log(static_cast<double>(horizon) * kd / delta)};
        case BaseKind::kLinUcb:
            if (d == 0) throw ContractViolation("LinUCB bound needs a feature dimension");
            return {0.5, static_cast<double>(d) * log_inv_delta};
        case BaseKind::kEpsilonGreedy:
            if (k <= 2) return {0.5, 16.0 * std::sqrt(log_inv_delta)};
            // Sum of gaps replaced by k (each gap is at most 1).
            return {2.0 / 3.0, 20.0 * std::cbrt(kd * log_inv_delta * kd)};
    }
    throw ConfigError("unknown base kind");
}

}  // namespace corral
