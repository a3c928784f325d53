#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace xplain {

namespace kernels {

using Word = std::uint64_t;

// Word-parallel operations over packed truth tables. Every entry point exists
// as a portable scalar reference and, on x86-64, as an AVX2 variant chosen at
// runtime. Both variants must produce bit-identical results.
struct KernelSet {
  const char* name;
  void (*and_into)(Word* dst, const Word* src, std::size_t n);
  void (*or_into)(Word* dst, const Word* src, std::size_t n);
  void (*andnot_into)(Word* dst, const Word* src, std::size_t n);  // dst &= ~src
  void (*xor_into)(Word* dst, const Word* src, std::size_t n);
  void (*invert)(Word* dst, std::size_t n);
  // Keeps only positions whose bit `var` equals `value`.
  void (*and_variable)(Word* dst, std::size_t n, unsigned var, bool value);
  // out[i] = 1 iff at least `t` of the `count` inputs have bit i set.
  void (*threshold)(const Word* const* inputs, std::size_t count, std::size_t n,
                    std::size_t t, Word* out);
  bool (*any)(const Word* src, std::size_t n);
  std::uint64_t (*popcount)(const Word* src, std::size_t n);
};

const KernelSet& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks AVX2.
const KernelSet* avx2_kernels();

// The set used by TruthTable. Defaults to the fastest supported variant.
const KernelSet& active_kernels();
void select_kernels(const KernelSet& set);

}  // namespace kernels

// Packed truth table over `vars` variables: bit x holds f(x), where bit i of
// the index x is the value of variable i.
class TruthTable {
 public:
  using Word = kernels::Word;

  TruthTable() = default;
  static TruthTable constant(std::size_t vars, bool value);
  static TruthTable literal(std::size_t vars, unsigned var, bool value);

  std::size_t vars() const { return vars_; }
  std::uint64_t entries() const { return std::uint64_t{1} << vars_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const Word> words() const { return words_; }
  Word* data() { return words_.data(); }
  const Word* data() const { return words_.data(); }

  bool get(std::uint64_t index) const {
    return (words_[index >> 6] >> (index & 63)) & 1U;
  }
  void set(std::uint64_t index, bool value);

  TruthTable& operator&=(const TruthTable& other);
  TruthTable& operator|=(const TruthTable& other);
  TruthTable& operator^=(const TruthTable& other);
  TruthTable& and_not(const TruthTable& other);
  TruthTable& invert();
  TruthTable& restrict_to(unsigned var, bool value);

  bool any() const;
  std::uint64_t count() const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  void clear_tail();

  std::size_t vars_ = 0;
  std::vector<Word> words_;
};

// Majority-style threshold over equally sized tables.
TruthTable threshold(std::span<const TruthTable* const> inputs, std::size_t t);

}  // namespace xplain
