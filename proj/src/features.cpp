#include "xplain/features.hpp"

#include <algorithm>
#include <stdexcept>

#include "xplain/error.hpp"

namespace xplain {

FeatureSet normalize_feature_set(FeatureSet set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

FeatureSet all_features(std::size_t n) {
  FeatureSet set(n);
  for (std::size_t i = 0; i < n; ++i) set[i] = static_cast<FeatureId>(i);
  return set;
}

FeatureSet complement(const FeatureSet& set, std::size_t n) {
  FeatureSet out;
  out.reserve(n - std::min(n, set.size()));
  auto it = set.begin();
  for (FeatureId f = 0; f < n; ++f) {
    while (it != set.end() && *it < f) ++it;
    if (it == set.end() || *it != f) out.push_back(f);
  }
  return out;
}

FeatureSpace::FeatureSpace(std::vector<std::string> names) {
  for (auto& name : names) {
    if (index_.count(name) != 0) throw Error(ErrorKind::validation, "duplicate feature name '" + name + "'");
    index_.emplace(name, static_cast<FeatureId>(names_.size()));
    names_.push_back(std::move(name));
  }
}

FeatureSpace FeatureSpace::numbered(std::size_t n, std::string_view prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) names.push_back(std::string(prefix) + std::to_string(i));
  return FeatureSpace(std::move(names));
}

FeatureId FeatureSpace::add(std::string_view name) {
  if (auto found = find(name)) return *found;
  const auto id = static_cast<FeatureId>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<FeatureId> FeatureSpace::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FeatureId FeatureSpace::at(std::string_view name) const {
  if (auto found = find(name)) return *found;
  throw Error(ErrorKind::undefined_feature, "undefined feature '" + std::string(name) + "'");
}

Example::Example(std::initializer_list<int> values) {
  values_.reserve(values.size());
  for (int v : values) values_.push_back(static_cast<std::uint8_t>(v != 0));
}

Example Example::from_bits(std::uint64_t bits, std::size_t n) {
  Example e(n);
  for (std::size_t i = 0; i < n; ++i) e.values_[i] = static_cast<std::uint8_t>((bits >> i) & 1U);
  return e;
}

std::uint64_t Example::to_bits() const {
  if (values_.size() > 64) throw std::length_error("example wider than 64 features");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) bits |= std::uint64_t{values_[i]} << i;
  return bits;
}

std::size_t Example::weight() const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), 1));
}

Example flip(const Example& e, const FeatureSet& features) {
  Example out = e;
  for (FeatureId f : features) out.set(f, 1 - e[f]);
  return out;
}

PartialExample PartialExample::restriction(const Example& e, const FeatureSet& features) {
  PartialExample tau(e.size());
  for (FeatureId f : features) tau.set(f, e[f]);
  return tau;
}

std::optional<int> PartialExample::get(FeatureId f) const {
  if (values_[f] == kUnset) return std::nullopt;
  return values_[f];
}

FeatureSet PartialExample::domain() const {
  FeatureSet set;
  for (std::size_t f = 0; f < values_.size(); ++f) {
    if (values_[f] != kUnset) set.push_back(static_cast<FeatureId>(f));
  }
  return set;
}

std::size_t PartialExample::size() const {
  return static_cast<std::size_t>(values_.size() - std::count(values_.begin(), values_.end(), kUnset));
}

bool PartialExample::agrees_with(const Example& e) const {
  for (std::size_t f = 0; f < values_.size(); ++f) {
    if (values_[f] != kUnset && values_[f] != e[static_cast<FeatureId>(f)]) return false;
  }
  return true;
}

}  // namespace xplain
