#include "corral/corral_master.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "corral/errors.hpp"
#include "corral/kernels/kernels.hpp"
#include "corral/sampling.hpp"

namespace corral {

namespace {

constexpr double kLambdaTolerance = 1e-12;
constexpr int kMaxBisections = 200;

void check_simplex(std::span<const double> p) {
    double total = 0.0;
    for (double x : p) {
        if (!(x > 0.0 && x <= 1.0)) throw ContractViolation("OMD input must be a strictly positive simplex");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ContractViolation("OMD input does not sum to one");
}

}  // namespace

OmdResult log_barrier_omd(std::span<const double> probs, std::span<const double> loss, std::span<const double> eta) {
    const std::size_t m = probs.size();
    if (m == 0 || loss.size() != m || eta.size() != m) throw ContractViolation("OMD inputs must share one nonzero size");
    check_simplex(probs);
    for (double e : eta)
        if (!(e > 0.0) || !std::isfinite(e)) throw ContractViolation("OMD learning rates must be positive");
    for (double l : loss)
        if (!std::isfinite(l)) throw ContractViolation("OMD losses must be finite");

    std::vector<double> inv_p(m);
    for (std::size_t j = 0; j < m; ++j) inv_p[j] = 1.0 / probs[j];

    const auto [min_it, max_it] = std::minmax_element(loss.begin(), loss.end());
    double lo = *min_it;
    double hi = *max_it;
    // Past the first pole (a denominator reaching zero) the residual is undefined;
    // the root lies strictly below it, so the pole caps the bracket.
    double pole = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) pole = std::min(pole, loss[j] + inv_p[j] / eta[j]);
    const bool hi_is_pole = pole <= hi;
    if (hi_is_pole) hi = pole;

    const auto& kernel = kernels::active_kernels();
    auto residual = [&](double lambda, double* min_denom) {
        return kernel.barrier_sum(inv_p.data(), eta.data(), loss.data(), m, lambda, min_denom) - 1.0;
    };

    OmdResult result;
    double min_denom = 0.0;
    if (hi == lo) {
        result.lambda = lo;
    } else {
        const double at_lo = residual(lo, &min_denom);
        if (at_lo > 1e-12) throw InvariantViolation("log-barrier residual positive at the lower bracket");
        if (!hi_is_pole && residual(hi, &min_denom) < -1e-12)
            throw InvariantViolation("log-barrier residual negative at the upper bracket");
        while (result.iterations < kMaxBisections && hi - lo > kLambdaTolerance) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            ++result.iterations;
            const double g = residual(mid, &min_denom);
            if (!(min_denom > 0.0)) throw InvariantViolation("log-barrier denominator left the positive region");
            if (g < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // hi may be the pole itself, so lo is the side that is always evaluable.
        result.lambda = (hi_is_pole && hi == pole) ? lo : lo + 0.5 * (hi - lo);
    }

    result.residual = residual(result.lambda, &min_denom);
    if (!(min_denom > 0.0)) throw InvariantViolation("log-barrier denominator left the positive region");
    result.probs.resize(m);
    for (std::size_t j = 0; j < m; ++j) result.probs[j] = 1.0 / (inv_p[j] + eta[j] * (loss[j] - result.lambda));
    return result;
}

// ---------------------------------------------------------------------------

CorralMaster::CorralMaster(std::size_t num_bases, double eta, std::size_t horizon)
    : probs_(num_bases), eta_(num_bases, eta), floor_(num_bases), horizon_(horizon),
      restart_counts_(num_bases, 0), loss_scratch_(num_bases, 0.0) {
    if (num_bases == 0) throw ContractViolation("CORRAL needs at least one base");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ContractViolation("CORRAL learning rate must be positive");
    if (horizon == 0) throw ContractViolation("CORRAL horizon must be positive");
    const double m = static_cast<double>(num_bases);
    const double t = static_cast<double>(horizon);
    std::fill(probs_.begin(), probs_.end(), 1.0 / m);
    std::fill(floor_.begin(), floor_.end(), 1.0 / (2.0 * m));
    gamma_ = 1.0 / t;
    // beta = e^{1/ln T}; T = 1 makes it infinite, and no update ever happens then anyway.
    beta_ = horizon > 1 ? std::exp(1.0 / std::log(t)) : std::exp(1.0);
}

std::size_t CorralMaster::sample(Rng& rng) const {
    return sample_categorical(probs_, rng);
}

std::size_t CorralMaster::restart_cap() const {
    const auto ceil_log2 = [](double x) { return static_cast<std::size_t>(std::ceil(std::log2(x))); };
    return ceil_log2(static_cast<double>(horizon_)) + ceil_log2(2.0 * static_cast<double>(num_bases()));
}

std::vector<std::size_t> CorralMaster::update(std::size_t chosen, double loss) {
    const std::size_t m = num_bases();
    if (chosen >= m) throw ContractViolation("chosen base index " + std::to_string(chosen) + " out of range");
    if (!(loss >= 0.0 && loss <= 1.0)) throw ContractViolation("CORRAL loss must lie in [0,1]");
    ++round_;

    std::fill(loss_scratch_.begin(), loss_scratch_.end(), 0.0);
    loss_scratch_[chosen] = loss / probs_[chosen];
    OmdResult step = log_barrier_omd(probs_, loss_scratch_, eta_);

    const double uniform = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) probs_[j] = (1.0 - gamma_) * step.probs[j] + gamma_ * uniform;

    std::vector<std::size_t> restarted;
    for (std::size_t j = 0; j < m; ++j) {
        if (floor_[j] > probs_[j]) {
            floor_[j] = probs_[j] / 2.0;
            eta_[j] *= beta_;
            restarted.push_back(j);
            restarts_.push_back({round_, j});
            if (++restart_counts_[j] > restart_cap())
                throw InvariantViolation("base " + std::to_string(j) + " exceeded the restart cap");
        }
    }
    return restarted;
}

}  // namespace corral
