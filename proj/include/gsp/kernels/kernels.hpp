#pragma once

// Vector kernels used by the inner loops of the library (operator application,
// Monte-Carlo error accumulation, Frobenius norms, incremental greedy scoring).
//
// Every kernel has a scalar reference implementation; SIMD variants are built
// when the target supports them and picked once at runtime. Setting the
// environment variable GSP_KERNELS=scalar forces the reference path.

#include <cstddef>
#include <string_view>

namespace gsp::kernels {

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();

/// SIMD table for this build, or nullptr when the build has none or the CPU
/// lacks the required instructions.
const KernelTable* simd_table();

/// Table selected at first use (SIMD when available, unless overridden).
const KernelTable& active();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double sum_squares(const double* a, std::size_t n) {
  return active().sum_squares(a, n);
}
inline double squared_distance(const double* a, const double* b, std::size_t n) {
  return active().squared_distance(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}

namespace detail {
// Per-ISA tables, defined in the matching translation unit.
extern const KernelTable kScalarTable;
#if defined(GSP_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif
#if defined(GSP_HAVE_NEON_KERNELS)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace gsp::kernels
