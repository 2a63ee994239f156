#include "corral/kernels/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace corral::kernels {

namespace {

void ucb_indices_avx2(const double* sums, const double* counts, std::size_t k, double bonus, double* out) {
    const __m256d vbonus = _mm256_set1_pd(bonus);
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vinf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t j = 0;
    for (; j + 4 <= k; j += 4) {
        const __m256d n = _mm256_loadu_pd(counts + j);
        const __m256d s = _mm256_loadu_pd(sums + j);
        const __m256d index = _mm256_add_pd(_mm256_div_pd(s, n), _mm256_sqrt_pd(_mm256_div_pd(vbonus, n)));
        const __m256d unpulled = _mm256_cmp_pd(n, vzero, _CMP_EQ_OQ);
        _mm256_storeu_pd(out + j, _mm256_blendv_pd(index, vinf, unpulled));
    }
    for (; j < k; ++j) {
        out[j] = counts[j] == 0.0 ? std::numeric_limits<double>::infinity()
                                  : sums[j] / counts[j] + std::sqrt(bonus / counts[j]);
    }
}

void linear_scores_avx2(const double* columns, std::size_t k, std::size_t d, const double* theta,
                        const double* vinv, double beta, double* out) {
    const __m256d vbeta = _mm256_set1_pd(beta);
    std::size_t j = 0;
    for (; j + 4 <= k; j += 4) {
        __m256d mean = _mm256_setzero_pd();
        for (std::size_t i = 0; i < d; ++i) {
            mean = _mm256_add_pd(mean, _mm256_mul_pd(_mm256_loadu_pd(columns + i * k + j), _mm256_set1_pd(theta[i])));
        }
        __m256d quad = _mm256_setzero_pd();
        for (std::size_t i = 0; i < d; ++i) {
            __m256d row = _mm256_setzero_pd();
            for (std::size_t l = 0; l < d; ++l) {
                row = _mm256_add_pd(row,
                                    _mm256_mul_pd(_mm256_set1_pd(vinv[i * d + l]), _mm256_loadu_pd(columns + l * k + j)));
            }
            quad = _mm256_add_pd(quad, _mm256_mul_pd(_mm256_loadu_pd(columns + i * k + j), row));
        }
        _mm256_storeu_pd(out + j, _mm256_add_pd(mean, _mm256_mul_pd(vbeta, _mm256_sqrt_pd(quad))));
    }
    for (; j < k; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < d; ++i) mean = mean + columns[i * k + j] * theta[i];
        double quad = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double row = 0.0;
            for (std::size_t l = 0; l < d; ++l) row = row + vinv[i * d + l] * columns[l * k + j];
            quad = quad + columns[i * k + j] * row;
        }
        out[j] = mean + beta * std::sqrt(quad);
    }
}

double barrier_sum_avx2(const double* inv_p, const double* eta, const double* loss, std::size_t m, double lambda,
                        double* min_denominator) {
    const __m256d vlambda = _mm256_set1_pd(lambda);
    const __m256d vone = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    __m256d lowest = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        const __m256d denom = _mm256_add_pd(
            _mm256_loadu_pd(inv_p + j),
            _mm256_mul_pd(_mm256_loadu_pd(eta + j), _mm256_sub_pd(_mm256_loadu_pd(loss + j), vlambda)));
        lowest = _mm256_min_pd(lowest, denom);
        acc = _mm256_add_pd(acc, _mm256_div_pd(vone, denom));
    }
    alignas(32) double lanes[4];
    alignas(32) double mins[4];
    _mm256_store_pd(lanes, acc);
    _mm256_store_pd(mins, lowest);
    double low = std::fmin(std::fmin(mins[0], mins[1]), std::fmin(mins[2], mins[3]));
    for (; j < m; ++j) {
        const double denom = inv_p[j] + eta[j] * (loss[j] - lambda);
        low = std::fmin(low, denom);
        lanes[j % 4] = lanes[j % 4] + 1.0 / denom;
    }
    if (min_denominator) *min_denominator = low;
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

constexpr KernelTable kAvx2{"avx2", &ucb_indices_avx2, &linear_scores_avx2, &barrier_sum_avx2};

}  // namespace

const KernelTable* avx2_kernels_unchecked() {
    return &kAvx2;
}

}  // namespace corral::kernels
