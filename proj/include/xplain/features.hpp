#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xplain {

using FeatureId = std::uint32_t;
using Label = int;  // class label, always 0 or 1

// Sorted, duplicate-free list of feature indices.
using FeatureSet = std::vector<FeatureId>;

FeatureSet normalize_feature_set(FeatureSet set);
FeatureSet all_features(std::size_t n);
FeatureSet complement(const FeatureSet& set, std::size_t n);

// Names <-> dense indices 0..n-1, in insertion order.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  explicit FeatureSpace(std::vector<std::string> names);
  static FeatureSpace numbered(std::size_t n, std::string_view prefix = "f");

  FeatureId add(std::string_view name);  // existing id if already present
  std::optional<FeatureId> find(std::string_view name) const;
  FeatureId at(std::string_view name) const;  // throws UndefinedFeature
  const std::string& name(FeatureId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  friend bool operator==(const FeatureSpace& a, const FeatureSpace& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, FeatureId> index_;
};

// Total 0/1 assignment.
class Example {
 public:
  Example() = default;
  explicit Example(std::size_t n) : values_(n, 0) {}
  Example(std::initializer_list<int> values);
  static Example from_bits(std::uint64_t bits, std::size_t n);

  std::size_t size() const { return values_.size(); }
  int operator[](FeatureId f) const { return values_[f]; }
  void set(FeatureId f, int value) { values_[f] = static_cast<std::uint8_t>(value != 0); }
  std::uint64_t to_bits() const;  // requires size() <= 64
  std::size_t weight() const;

  friend bool operator==(const Example&, const Example&) = default;
  friend auto operator<=>(const Example&, const Example&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

// e_A: e with every feature of A flipped.
Example flip(const Example& e, const FeatureSet& features);

// Partial 0/1 assignment over a universe of n features.
class PartialExample {
 public:
  PartialExample() = default;
  explicit PartialExample(std::size_t n) : values_(n, kUnset) {}
  // e restricted to `features`.
  static PartialExample restriction(const Example& e, const FeatureSet& features);

  std::size_t universe() const { return values_.size(); }
  bool defined(FeatureId f) const { return values_[f] != kUnset; }
  std::optional<int> get(FeatureId f) const;
  int value(FeatureId f) const { return values_[f]; }  // -1 when unset
  void set(FeatureId f, int value) { values_[f] = static_cast<std::int8_t>(value != 0); }
  void erase(FeatureId f) { values_[f] = kUnset; }

  FeatureSet domain() const;
  std::size_t size() const;
  bool agrees_with(const Example& e) const;

  friend bool operator==(const PartialExample&, const PartialExample&) = default;

 private:
  static constexpr std::int8_t kUnset = -1;
  std::vector<std::int8_t> values_;
};

}  // namespace xplain
