#pragma once

#include <algorithm>
#include <bit>
#include <cstring>

#include "xplain/kernels.hpp"

namespace xplain::kernels::detail {

// Mask of the positions inside one word whose bit `var` (< 6) is set.
inline constexpr Word kLowVariableMask[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

// Variables >= 6 select whole words; the same block clearing serves every
// variant.
inline void clear_high_variable(Word* dst, std::size_t n, unsigned var, bool value) {
  const std::size_t block = std::size_t{1} << (var - 6);
  for (std::size_t start = 0; start < n; start += 2 * block) {
    const std::size_t from = value ? start : start + block;
    if (from >= n) break;
    std::memset(dst + from, 0, std::min(block, n - from) * sizeof(Word));
  }
}

inline unsigned counter_planes(std::size_t count) {
  return static_cast<unsigned>(std::bit_width(count));
}

}  // namespace xplain::kernels::detail
