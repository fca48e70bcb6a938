#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace zsect::simd {

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &scalar::horner_value, &scalar::horner_newton,
                                 &scalar::aberth_sum};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(ZSECT_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", &avx2::horner_value, &avx2::horner_newton,
                                 &avx2::aberth_sum};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* env = std::getenv("ZSECT_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* wide = avx2_kernels()) return *wide;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace zsect::simd
