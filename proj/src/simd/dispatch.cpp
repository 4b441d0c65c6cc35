#include <cstdlib>
#include <string_view>

#include "pathlogic/simd/kernels.hpp"

namespace pathlogic::simd {

#if defined(PATHLOGIC_HAVE_AVX2)
const Kernels& avx2_kernel_table();
#endif

const Kernels* avx2_kernels() {
#if defined(PATHLOGIC_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

static const Kernels& select_kernels() {
  const char* forced = std::getenv("PATHLOGIC_SIMD");
  if (forced && std::string_view(forced) == "scalar") return scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return *k;
  return scalar_kernels();
}

const Kernels& active_kernels() {
  static const Kernels& chosen = select_kernels();
  return chosen;
}

}  // namespace pathlogic::simd
