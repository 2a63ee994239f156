#include "corral/kernels/kernels.hpp"

#include <cmath>
#include <limits>

namespace corral::kernels {

namespace {

void ucb_indices_scalar(const double* sums, const double* counts, std::size_t k, double bonus, double* out) {
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0.0) {
            out[j] = std::numeric_limits<double>::infinity();
        } else {
            out[j] = sums[j] / counts[j] + std::sqrt(bonus / counts[j]);
        }
    }
}

void linear_scores_scalar(const double* columns, std::size_t k, std::size_t d, const double* theta,
                          const double* vinv, double beta, double* out) {
    for (std::size_t j = 0; j < k; ++j) {
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

double barrier_sum_scalar(const double* inv_p, const double* eta, const double* loss, std::size_t m,
                          double lambda, double* min_denominator) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        const double denom = inv_p[j] + eta[j] * (loss[j] - lambda);
        lowest = std::fmin(lowest, denom);
        acc[j % 4] = acc[j % 4] + 1.0 / denom;
    }
    if (min_denominator) *min_denominator = lowest;
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

constexpr KernelTable kScalar{"scalar", &ucb_indices_scalar, &linear_scores_scalar, &barrier_sum_scalar};

}  // namespace

const KernelTable& scalar_kernels() {
    return kScalar;
}

std::size_t argmax_lowest(const double* values, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
        if (values[j] > values[best] || (std::isnan(values[best]) && !std::isnan(values[j]))) best = j;
    }
    return best;
}

}  // namespace corral::kernels
