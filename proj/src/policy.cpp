#include "corral/policy.hpp"

#include "corral/errors.hpp"
#include "corral/kernels/kernels.hpp"
#include "corral/sampling.hpp"

namespace corral {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t linear_argmax(const PolicySnapshot::LinearOptimistic& rule, const ActionSet& set) {
    if (set.dim() != rule.theta.size()) throw ContractViolation("linear policy played on a set of another dimension");
    thread_local std::vector<double> scores;
    scores.resize(set.num_arms());
    kernels::active_kernels().linear_scores(set.columns().data(), set.num_arms(), set.dim(), rule.theta.data(),
                                            rule.vinv.data(), rule.beta, scores.data());
    return kernels::argmax_lowest(scores.data(), scores.size());
}

void check_arm(std::size_t arm, const ActionSet& set) {
    if (!set.contains(arm)) throw ContractViolation("policy refers to an arm outside the action set");
}

}  // namespace

std::vector<double> PolicySnapshot::probabilities(const ActionSet& set) const {
    const std::size_t k = set.num_arms();
    std::vector<double> p(k, 0.0);
    std::visit(Overloaded{
                   [&](const Uniform&) { std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(k)); },
                   [&](const PointMass& r) {
                       check_arm(r.arm, set);
                       p[r.arm] = 1.0;
                   },
                   [&](const EpsilonGreedy& r) {
                       check_arm(r.greedy_arm, set);
                       std::fill(p.begin(), p.end(), r.epsilon / static_cast<double>(k));
                       p[r.greedy_arm] += 1.0 - r.epsilon;
                   },
                   [&](const Categorical& r) {
                       if (r.probs.size() != k) throw ContractViolation("categorical policy size mismatch");
                       p = r.probs;
                   },
                   [&](const LinearOptimistic& r) { p[linear_argmax(r, set)] = 1.0; },
               },
               rule_);
    return p;
}

std::size_t PolicySnapshot::sample(const ActionSet& set, Rng& rng) const {
    const std::size_t k = set.num_arms();
    return std::visit(Overloaded{
                          [&](const Uniform&) { return rng.uniform_index(k); },
                          [&](const PointMass& r) {
                              check_arm(r.arm, set);
                              return r.arm;
                          },
                          [&](const EpsilonGreedy& r) {
                              check_arm(r.greedy_arm, set);
                              return rng.uniform01() < r.epsilon ? rng.uniform_index(k) : r.greedy_arm;
                          },
                          [&](const Categorical& r) {
                              if (r.probs.size() != k) throw ContractViolation("categorical policy size mismatch");
                              return sample_categorical(r.probs, rng);
                          },
                          [&](const LinearOptimistic& r) { return linear_argmax(r, set); },
                      },
                      rule_);
}

}  // namespace corral
