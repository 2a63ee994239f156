#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops shared by the learners and the CORRAL master.
// Every kernel has a scalar reference implementation; SIMD variants must reproduce
// it bit for bit (same operation order per lane, no FMA contraction), which the
// equivalence tests check.
namespace corral::kernels {

// out[j] = sums[j]/counts[j] + sqrt(bonus/counts[j]), or +inf when counts[j] == 0.
using UcbIndicesFn = void (*)(const double* sums, const double* counts, std::size_t k, double bonus,
                              double* out);

// Optimistic linear scores over k arms in dimension d.
// columns[i*k + j] is coordinate i of arm j; vinv is d x d row-major.
// out[j] = <a_j, theta> + beta * sqrt(a_j^T vinv a_j).
using LinearScoresFn = void (*)(const double* columns, std::size_t k, std::size_t d, const double* theta,
                                const double* vinv, double beta, double* out);

// Sum over j of 1 / (inv_p[j] + eta[j] * (loss[j] - lambda)). The smallest denominator
// is written to *min_denominator so callers can detect leaving the feasible bracket.
using BarrierSumFn = double (*)(const double* inv_p, const double* eta, const double* loss, std::size_t m,
                                double lambda, double* min_denominator);

struct KernelTable {
    std::string_view name;
    UcbIndicesFn ucb_indices;
    LinearScoresFn linear_scores;
    BarrierSumFn barrier_sum;
};

const KernelTable& scalar_kernels();

// nullptr when the binary was built without the variant or the CPU lacks it.
const KernelTable* avx2_kernels();

// Selected once per process: AVX2 when available, unless CORRAL_KERNELS=scalar.
const KernelTable& active_kernels();

// Index of the largest value, lowest index on ties. NaN entries are never selected
// unless every entry is NaN.
std::size_t argmax_lowest(const double* values, std::size_t n);

}  // namespace corral::kernels
