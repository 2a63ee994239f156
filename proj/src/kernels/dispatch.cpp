#include "corral/kernels/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace corral::kernels {

#if defined(CORRAL_HAVE_AVX2)
const KernelTable* avx2_kernels_unchecked();
#endif

const KernelTable* avx2_kernels() {
#if defined(CORRAL_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? avx2_kernels_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() {
    static const KernelTable& table = [] () -> const KernelTable& {
        const char* requested = std::getenv("CORRAL_KERNELS");
        if (requested && std::string_view(requested) == "scalar") return scalar_kernels();
        if (const KernelTable* simd = avx2_kernels()) return *simd;
        return scalar_kernels();
    }();
    return table;
}

}  // namespace corral::kernels
