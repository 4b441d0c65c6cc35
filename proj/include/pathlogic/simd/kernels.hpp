#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Bit-parallel truth-table kernels. A table over n atoms stores one bit per
// assignment, 64 assignments per word. Every variant must be bit-for-bit
// equivalent to the scalar reference.

namespace pathlogic::simd {

using Word = std::uint64_t;

struct Kernels {
  std::string_view name;
  void (*and_words)(Word* dst, const Word* a, const Word* b, std::size_t n);
  void (*or_words)(Word* dst, const Word* a, const Word* b, std::size_t n);
  /// dst = ~a | b
  void (*implies_words)(Word* dst, const Word* a, const Word* b, std::size_t n);
  void (*not_words)(Word* dst, const Word* a, std::size_t n);
  /// True iff some bit is set in every row and clear in `goal`. A null goal
  /// counts as all-zero, so the call then asks whether the rows intersect.
  /// With no rows the conjunction is all-ones.
  bool (*conjunction_escapes)(const Word* const* rows, std::size_t row_count, const Word* goal, std::size_t n);
};

const Kernels& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const Kernels* avx2_kernels();

/// Best variant for this CPU, chosen once. Setting PATHLOGIC_SIMD=scalar in
/// the environment forces the reference kernels.
const Kernels& active_kernels();

}  // namespace pathlogic::simd
