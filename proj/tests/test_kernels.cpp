#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "corral/kernels/kernels.hpp"
#include "corral/rng.hpp"

namespace k = corral::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("argmax_lowest breaks ties toward the lowest index") {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> v{1.0, 3.0, 3.0, 2.0};
    CHECK(k::argmax_lowest(v.data(), v.size()) == 1);
    std::vector<double> w{inf, 5.0, inf};
    CHECK(k::argmax_lowest(w.data(), w.size()) == 0);
    std::vector<double> x{nan, 0.5, nan};
    CHECK(k::argmax_lowest(x.data(), x.size()) == 1);
}

TEST_CASE("scalar UCB indices follow the closed form") {
    std::vector<double> sums{5.0, 0.0, 2.0};
    std::vector<double> counts{10.0, 0.0, 4.0};
    std::vector<double> out(3);
    k::scalar_kernels().ucb_indices(sums.data(), counts.data(), 3, 6.0, out.data());
    CHECK(out[0] == doctest::Approx(0.5 + std::sqrt(0.6)));
    CHECK(std::isinf(out[1]));
    CHECK(out[2] == doctest::Approx(0.5 + std::sqrt(1.5)));
}

TEST_CASE("scalar linear scores follow the closed form") {
    // arms (1,0), (0,1), (0.5,0.5) stored coordinate-major
    std::vector<double> columns{1.0, 0.0, 0.5, 0.0, 1.0, 0.5};
    std::vector<double> theta{0.2, 0.4};
    std::vector<double> vinv{1.0, 0.0, 0.0, 0.25};
    std::vector<double> out(3);
    k::scalar_kernels().linear_scores(columns.data(), 3, 2, theta.data(), vinv.data(), 2.0, out.data());
    CHECK(out[0] == doctest::Approx(0.2 + 2.0));
    CHECK(out[1] == doctest::Approx(0.4 + 2.0 * 0.5));
    CHECK(out[2] == doctest::Approx(0.3 + 2.0 * std::sqrt(0.25 + 0.0625)));
}

TEST_CASE("scalar barrier sum reports the smallest denominator") {
    std::vector<double> inv_p{2.0, 2.0};
    std::vector<double> eta{1.0, 1.0};
    std::vector<double> loss{1.0, 0.0};
    double min_denom = 0.0;
    const double s = k::scalar_kernels().barrier_sum(inv_p.data(), eta.data(), loss.data(), 2, 0.5, &min_denom);
    CHECK(s == doctest::Approx(1.0 / 2.5 + 1.0 / 1.5));
    CHECK(min_denom == doctest::Approx(1.5));
}

TEST_CASE("SIMD kernels agree bit for bit with the scalar reference") {
    const k::KernelTable* simd = k::avx2_kernels();
    if (simd == nullptr) {
        MESSAGE("no SIMD kernels on this machine; equivalence test skipped");
        return;
    }
    const k::KernelTable& ref = k::scalar_kernels();
    corral::Rng rng(11, 1);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 17u, 50u, 63u, 101u}) {
        std::vector<double> sums(n), counts(n), a(n), b(n);
        for (std::size_t j = 0; j < n; ++j) {
            counts[j] = static_cast<double>(rng.uniform_index(20));
            sums[j] = counts[j] * rng.uniform01();
        }
        ref.ucb_indices(sums.data(), counts.data(), n, 6.0 * std::log(1234.0), a.data());
        simd->ucb_indices(sums.data(), counts.data(), n, 6.0 * std::log(1234.0), b.data());
        CHECK(same_bits(a, b));

        for (std::size_t d : {1u, 2u, 3u, 5u}) {
            std::vector<double> columns(n * d), theta(d), vinv(d * d, 0.0);
            for (auto& x : columns) x = rng.uniform01();
            for (auto& x : theta) x = rng.uniform01() - 0.5;
            for (std::size_t i = 0; i < d; ++i) {
                vinv[i * d + i] = 1.0 + rng.uniform01();
                for (std::size_t l = 0; l < i; ++l) vinv[i * d + l] = vinv[l * d + i] = 0.1 * rng.uniform01();
            }
            ref.linear_scores(columns.data(), n, d, theta.data(), vinv.data(), 1.7, a.data());
            simd->linear_scores(columns.data(), n, d, theta.data(), vinv.data(), 1.7, b.data());
            CHECK(same_bits(a, b));
        }

        std::vector<double> inv_p(n), eta(n), loss(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            inv_p[j] = static_cast<double>(n) * (0.5 + rng.uniform01());
            eta[j] = 0.1 + rng.uniform01();
        }
        loss[rng.uniform_index(n)] = 3.0 * rng.uniform01();
        double min_a = 0.0;
        double min_b = 0.0;
        const double sa = ref.barrier_sum(inv_p.data(), eta.data(), loss.data(), n, 0.3, &min_a);
        const double sb = simd->barrier_sum(inv_p.data(), eta.data(), loss.data(), n, 0.3, &min_b);
        CHECK(std::memcmp(&sa, &sb, sizeof sa) == 0);
        CHECK(min_a == min_b);
    }
}

TEST_CASE("active kernels are one of the known tables") {
    const auto& active = k::active_kernels();
    CHECK((active.name == k::scalar_kernels().name || (k::avx2_kernels() && active.name == k::avx2_kernels()->name)));
}
