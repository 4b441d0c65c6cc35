#include <immintrin.h>

#include "pathlogic/simd/kernels.hpp"

namespace pathlogic::simd {

namespace avx2 {

namespace {
constexpr std::size_t kLanes = 4;  // 64-bit words per __m256i

inline __m256i load(const Word* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(Word* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }
}  // namespace

void and_words(Word* dst, const Word* a, const Word* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) store(dst + i, _mm256_and_si256(load(a + i), load(b + i)));
  for (; i < n; ++i) dst[i] = a[i] & b[i];
}

void or_words(Word* dst, const Word* a, const Word* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) store(dst + i, _mm256_or_si256(load(a + i), load(b + i)));
  for (; i < n; ++i) dst[i] = a[i] | b[i];
}

void implies_words(Word* dst, const Word* a, const Word* b, std::size_t n) {
  const __m256i ones = _mm256_set1_epi64x(-1);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256i not_a = _mm256_xor_si256(load(a + i), ones);
    store(dst + i, _mm256_or_si256(not_a, load(b + i)));
  }
  for (; i < n; ++i) dst[i] = ~a[i] | b[i];
}

void not_words(Word* dst, const Word* a, std::size_t n) {
  const __m256i ones = _mm256_set1_epi64x(-1);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) store(dst + i, _mm256_xor_si256(load(a + i), ones));
  for (; i < n; ++i) dst[i] = ~a[i];
}

bool conjunction_escapes(const Word* const* rows, std::size_t row_count, const Word* goal, std::size_t n) {
  const __m256i ones = _mm256_set1_epi64x(-1);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256i acc = ones;
    for (std::size_t r = 0; r < row_count; ++r) {
      acc = _mm256_and_si256(acc, load(rows[r] + i));
      if (_mm256_testz_si256(acc, acc)) break;
    }
    // andnot computes ~goal & acc
    if (goal) acc = _mm256_andnot_si256(load(goal + i), acc);
    if (!_mm256_testz_si256(acc, acc)) return true;
  }
  for (; i < n; ++i) {
    Word acc = ~Word{0};
    for (std::size_t r = 0; r < row_count && acc; ++r) acc &= rows[r][i];
    if (goal) acc &= ~goal[i];
    if (acc) return true;
  }
  return false;
}

}  // namespace avx2

const Kernels& avx2_kernel_table() {
  static const Kernels k{"avx2", avx2::and_words, avx2::or_words, avx2::implies_words, avx2::not_words,
                         avx2::conjunction_escapes};
  return k;
}

}  // namespace pathlogic::simd
