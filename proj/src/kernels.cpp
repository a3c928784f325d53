#include "xplain/kernels.hpp"

#include <atomic>
#include <stdexcept>

#include "kernels_internal.hpp"

namespace xplain {
namespace kernels {

#if defined(XPLAIN_HAVE_AVX2)
const KernelSet& avx2_kernel_table();
#endif

namespace {

void scalar_and(Word* dst, const Word* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] &= src[i];
}

void scalar_or(Word* dst, const Word* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

void scalar_andnot(Word* dst, const Word* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] &= ~src[i];
}

void scalar_xor(Word* dst, const Word* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

void scalar_invert(Word* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = ~dst[i];
}

void scalar_and_variable(Word* dst, std::size_t n, unsigned var, bool value) {
  if (var >= 6) {
    detail::clear_high_variable(dst, n, var, value);
    return;
  }
  const Word mask = value ? detail::kLowVariableMask[var] : ~detail::kLowVariableMask[var];
  for (std::size_t i = 0; i < n; ++i) dst[i] &= mask;
}

void scalar_threshold(const Word* const* inputs, std::size_t count, std::size_t n,
                      std::size_t t, Word* out) {
  if (t == 0) {
    for (std::size_t i = 0; i < n; ++i) out[i] = ~Word{0};
    return;
  }
  if (t > count) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0;
    return;
  }
  const unsigned planes = detail::counter_planes(count);
  Word counter[64];
  for (std::size_t i = 0; i < n; ++i) {
    for (unsigned b = 0; b < planes; ++b) counter[b] = 0;
    for (std::size_t k = 0; k < count; ++k) {
      Word carry = inputs[k][i];
      for (unsigned b = 0; b < planes && carry != 0; ++b) {
        const Word next = counter[b] & carry;
        counter[b] ^= carry;
        carry = next;
      }
    }
    Word greater = 0;
    Word equal = ~Word{0};
    for (unsigned b = planes; b-- > 0;) {
      if ((t >> b) & 1U) {
        equal &= counter[b];
      } else {
        greater |= equal & counter[b];
        equal &= ~counter[b];
      }
    }
    out[i] = greater | equal;
  }
}

bool scalar_any(const Word* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (src[i] != 0) return true;
  }
  return false;
}

std::uint64_t scalar_popcount(const Word* src, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::uint64_t>(std::popcount(src[i]));
  return total;
}

const KernelSet kScalar{
    "scalar",          scalar_and,       scalar_or, scalar_andnot, scalar_xor, scalar_invert,
    scalar_and_variable, scalar_threshold, scalar_any, scalar_popcount,
};

const KernelSet* detect_best() {
  if (const KernelSet* avx = avx2_kernels()) return avx;
  return &kScalar;
}

std::atomic<const KernelSet*>& active_slot() {
  static std::atomic<const KernelSet*> slot{detect_best()};
  return slot;
}

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

const KernelSet* avx2_kernels() {
#if defined(XPLAIN_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() { return *active_slot().load(std::memory_order_relaxed); }

void select_kernels(const KernelSet& set) { active_slot().store(&set, std::memory_order_relaxed); }

}  // namespace kernels

namespace {

std::size_t words_for(std::size_t vars) {
  if (vars > 40) throw std::length_error("truth table over more than 40 variables");
  return vars <= 6 ? 1 : std::size_t{1} << (vars - 6);
}

void require_same_shape(const TruthTable& a, const TruthTable& b) {
  if (a.vars() != b.vars()) throw std::invalid_argument("truth tables over different variable counts");
}

}  // namespace

TruthTable TruthTable::constant(std::size_t vars, bool value) {
  TruthTable table;
  table.vars_ = vars;
  table.words_.assign(words_for(vars), value ? ~Word{0} : Word{0});
  table.clear_tail();
  return table;
}

TruthTable TruthTable::literal(std::size_t vars, unsigned var, bool value) {
  if (var >= vars) throw std::out_of_range("literal variable outside the table");
  TruthTable table = constant(vars, true);
  table.restrict_to(var, value);
  return table;
}

void TruthTable::set(std::uint64_t index, bool value) {
  const Word bit = Word{1} << (index & 63);
  if (value) {
    words_[index >> 6] |= bit;
  } else {
    words_[index >> 6] &= ~bit;
  }
}

TruthTable& TruthTable::operator&=(const TruthTable& other) {
  require_same_shape(*this, other);
  kernels::active_kernels().and_into(words_.data(), other.words_.data(), words_.size());
  return *this;
}

TruthTable& TruthTable::operator|=(const TruthTable& other) {
  require_same_shape(*this, other);
  kernels::active_kernels().or_into(words_.data(), other.words_.data(), words_.size());
  return *this;
}

TruthTable& TruthTable::operator^=(const TruthTable& other) {
  require_same_shape(*this, other);
  kernels::active_kernels().xor_into(words_.data(), other.words_.data(), words_.size());
  return *this;
}

TruthTable& TruthTable::and_not(const TruthTable& other) {
  require_same_shape(*this, other);
  kernels::active_kernels().andnot_into(words_.data(), other.words_.data(), words_.size());
  return *this;
}

TruthTable& TruthTable::invert() {
  kernels::active_kernels().invert(words_.data(), words_.size());
  clear_tail();
  return *this;
}

TruthTable& TruthTable::restrict_to(unsigned var, bool value) {
  if (var >= vars_) throw std::out_of_range("restriction variable outside the table");
  kernels::active_kernels().and_variable(words_.data(), words_.size(), var, value);
  return *this;
}

bool TruthTable::any() const { return kernels::active_kernels().any(words_.data(), words_.size()); }

std::uint64_t TruthTable::count() const {
  return kernels::active_kernels().popcount(words_.data(), words_.size());
}

void TruthTable::clear_tail() {
  if (vars_ < 6 && !words_.empty()) words_[0] &= (Word{1} << (std::size_t{1} << vars_)) - 1;
}

TruthTable threshold(std::span<const TruthTable* const> inputs, std::size_t t) {
  if (inputs.empty()) throw std::invalid_argument("threshold over no inputs");
  const std::size_t vars = inputs.front()->vars();
  std::vector<const kernels::Word*> rows;
  rows.reserve(inputs.size());
  for (const TruthTable* table : inputs) {
    if (table->vars() != vars) throw std::invalid_argument("truth tables over different variable counts");
    rows.push_back(table->data());
  }
  TruthTable out = TruthTable::constant(vars, false);
  kernels::active_kernels().threshold(rows.data(), rows.size(), out.word_count(), t, out.data());
  out &= TruthTable::constant(vars, true);
  return out;
}

}  // namespace xplain
