#include "pathlogic/simd/kernels.hpp"

namespace pathlogic::simd {

namespace generic {

void and_words(Word* dst, const Word* a, const Word* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] & b[i];
}

void or_words(Word* dst, const Word* a, const Word* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] | b[i];
}

void implies_words(Word* dst, const Word* a, const Word* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = ~a[i] | b[i];
}

void not_words(Word* dst, const Word* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = ~a[i];
}

bool conjunction_escapes(const Word* const* rows, std::size_t row_count, const Word* goal, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    Word acc = ~Word{0};
    for (std::size_t r = 0; r < row_count && acc; ++r) acc &= rows[r][i];
    if (goal) acc &= ~goal[i];
    if (acc) return true;
  }
  return false;
}

}  // namespace generic

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", generic::and_words, generic::or_words, generic::implies_words, generic::not_words,
                         generic::conjunction_escapes};
  return k;
}

}  // namespace pathlogic::simd
