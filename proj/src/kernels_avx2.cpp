#include <immintrin.h>

#include "kernels_internal.hpp"

namespace xplain::kernels {

namespace {

inline __m256i load(const Word* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(Word* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

void avx2_and(Word* dst, const Word* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_and_si256(load(dst + i), load(src + i)));
  for (; i < n; ++i) dst[i] &= src[i];
}

void avx2_or(Word* dst, const Word* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_or_si256(load(dst + i), load(src + i)));
  for (; i < n; ++i) dst[i] |= src[i];
}

void avx2_andnot(Word* dst, const Word* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_andnot_si256(load(src + i), load(dst + i)));
  for (; i < n; ++i) dst[i] &= ~src[i];
}

void avx2_xor(Word* dst, const Word* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_xor_si256(load(dst + i), load(src + i)));
  for (; i < n; ++i) dst[i] ^= src[i];
}

void avx2_invert(Word* dst, std::size_t n) {
  const __m256i ones = _mm256_set1_epi64x(-1);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_xor_si256(load(dst + i), ones));
  for (; i < n; ++i) dst[i] = ~dst[i];
}

void avx2_and_variable(Word* dst, std::size_t n, unsigned var, bool value) {
  if (var >= 6) {
    detail::clear_high_variable(dst, n, var, value);
    return;
  }
  const Word mask = value ? detail::kLowVariableMask[var] : ~detail::kLowVariableMask[var];
  const __m256i vmask = _mm256_set1_epi64x(static_cast<long long>(mask));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(dst + i, _mm256_and_si256(load(dst + i), vmask));
  for (; i < n; ++i) dst[i] &= mask;
}

// Bit-sliced vertical counter, four words per step.
void avx2_threshold(const Word* const* inputs, std::size_t count, std::size_t n, std::size_t t,
                    Word* out) {
  if (t == 0 || t > count) {
    const Word fill = t == 0 ? ~Word{0} : Word{0};
    for (std::size_t i = 0; i < n; ++i) out[i] = fill;
    return;
  }
  const unsigned planes = detail::counter_planes(count);
  const __m256i zero = _mm256_setzero_si256();
  const __m256i ones = _mm256_set1_epi64x(-1);
  __m256i counter[64];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (unsigned b = 0; b < planes; ++b) counter[b] = zero;
    for (std::size_t k = 0; k < count; ++k) {
      __m256i carry = load(inputs[k] + i);
      for (unsigned b = 0; b < planes; ++b) {
        const __m256i next = _mm256_and_si256(counter[b], carry);
        counter[b] = _mm256_xor_si256(counter[b], carry);
        carry = next;
      }
    }
    __m256i greater = zero;
    __m256i equal = ones;
    for (unsigned b = planes; b-- > 0;) {
      if ((t >> b) & 1U) {
        equal = _mm256_and_si256(equal, counter[b]);
      } else {
        greater = _mm256_or_si256(greater, _mm256_and_si256(equal, counter[b]));
        equal = _mm256_andnot_si256(counter[b], equal);
      }
    }
    store(out + i, _mm256_or_si256(greater, equal));
  }
  if (i < n) {
    std::vector<const Word*> rest(count);
    for (std::size_t k = 0; k < count; ++k) rest[k] = inputs[k] + i;
    scalar_kernels().threshold(rest.data(), count, n - i, t, out + i);
  }
}

bool avx2_any(const Word* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = load(src + i);
    if (!_mm256_testz_si256(v, v)) return true;
  }
  for (; i < n; ++i) {
    if (src[i] != 0) return true;
  }
  return false;
}

// No native 64-bit vector popcount in AVX2; nibble lookup plus SAD.
std::uint64_t avx2_popcount(const Word* src, std::size_t n) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1,
                                          2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_nibble = _mm256_set1_epi8(0x0F);
  __m256i total = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = load(src + i);
    const __m256i lo = _mm256_shuffle_epi8(lookup, _mm256_and_si256(v, low_nibble));
    const __m256i hi = _mm256_shuffle_epi8(lookup, _mm256_and_si256(_mm256_srli_epi16(v, 4), low_nibble));
    total = _mm256_add_epi64(total, _mm256_sad_epu8(_mm256_add_epi8(lo, hi), _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), total);
  std::uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) sum += static_cast<std::uint64_t>(std::popcount(src[i]));
  return sum;
}

const KernelSet kAvx2{
    "avx2",          avx2_and,       avx2_or,  avx2_andnot,  avx2_xor, avx2_invert,
    avx2_and_variable, avx2_threshold, avx2_any, avx2_popcount,
};

}  // namespace

const KernelSet& avx2_kernel_table() { return kAvx2; }

}  // namespace xplain::kernels
