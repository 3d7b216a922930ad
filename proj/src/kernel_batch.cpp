// Compiled with -ffast-math so that glibc exposes its vector math entry
// points; the inputs are finite phases, where the relaxed semantics are exact
// enough (a few ulp).
#include "weakbem/kernel.hpp"

#include <math.h>

namespace weakbem {

#if defined(__x86_64__) && defined(__GNUC__) && !defined(__clang__)
__attribute__((target_clones("avx2", "default")))
#endif
void cos_sin_batch(const double* __restrict x, double* __restrict c, double* __restrict s, std::size_t n) {
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = cos(x[i]);
  }
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = sin(x[i]);
  }
}

}  // namespace weakbem
