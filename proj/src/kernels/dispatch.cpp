#include <cstdlib>
#include <string_view>

#include "gsp/kernels/kernels.hpp"

namespace gsp::kernels {

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* simd_table() {
#if defined(GSP_HAVE_AVX2_KERNELS)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &detail::kAvx2Table : nullptr;
#elif defined(GSP_HAVE_NEON_KERNELS)
  return &detail::kNeonTable;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* forced = std::getenv("GSP_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    if (const KernelTable* simd = simd_table()) return *simd;
    return scalar_table();
  }();
  return table;
}

}  // namespace gsp::kernels
