#include "xplain/dt.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "xplain/error.hpp"

namespace xplain {

namespace {

std::optional<Witness> greedy_shrink(Witness w, const std::function<bool(const Witness&)>& valid) {
  if (!valid(w)) return std::nullopt;
  const FeatureSet members = w.local() ? w.features() : w.assignment().domain();
  for (FeatureId f : members) {
    Witness smaller = without(w, f);
    if (valid(smaller)) w = std::move(smaller);
  }
  return w;
}

std::size_t saturating_power(std::size_t base, std::size_t exponent) {
  std::size_t value = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && value > std::numeric_limits<std::size_t>::max() / base) {
      return std::numeric_limits<std::size_t>::max();
    }
    value *= base;
  }
  return value;
}

}  // namespace

bool dt_check(const DecisionTree& tree, const ExplanationQuery& q, const Witness& w) {
  const Label example_class = q.local() ? classify(tree, q.example()) : 0;
  return holds_via(q, w, example_class, [&](const PartialExample& tau, Label c) {
    return !reachable_leaves(tree, tau).contains(1 - c);
  });
}

std::optional<Witness> dt_subset_min(const DecisionTree& tree, const ExplanationQuery& q) {
  auto valid = [&](const Witness& w) { return dt_check(tree, q, w); };
  switch (q.kind()) {
    case XpKind::lAXp:
      return greedy_shrink(Witness(all_features(tree.num_features)), valid);
    case XpKind::lCXp:
      try {
        return dt_min_lcxp(tree, q.example());
      } catch (const Error& ex) {
        if (ex.kind() == ErrorKind::homogeneous) return std::nullopt;
        throw;
      }
    case XpKind::gAXp:
    case XpKind::gCXp: {
      const Label seed = q.kind() == XpKind::gAXp ? q.target_class() : 1 - q.target_class();
      for (const LeafPath& leaf : leaf_paths(tree)) {
        if (leaf.label == seed) return greedy_shrink(Witness(leaf.path), valid);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

Witness dt_min_lcxp(const DecisionTree& tree, const Example& e) {
  const Label own = classify(tree, e);
  std::optional<FeatureSet> best;
  for (const LeafPath& leaf : leaf_paths(tree)) {
    if (leaf.label == own) continue;
    FeatureSet disagreement;
    for (FeatureId f : leaf.path.domain()) {
      if (leaf.path.value(f) != e[f]) disagreement.push_back(f);
    }
    if (!best || disagreement.size() < best->size() ||
        (disagreement.size() == best->size() && disagreement < *best)) {
      best = std::move(disagreement);
    }
  }
  if (!best) throw Error(ErrorKind::homogeneous, "every leaf carries the class of the example");
  return Witness(std::move(*best));
}

std::optional<Witness> dt_xp_search(const DecisionTree& tree, const ExplanationQuery& q) {
  const std::size_t n = tree.num_features;
  return enumerate_minimum(q.local(), n, q.budget().value_or(n),
                           [&](const Witness& w) { return dt_check(tree, q, w); });
}

std::size_t dt_product_bound(const Ensemble& ensemble) {
  std::size_t m = 0;
  for (const ElementBody& element : ensemble.elements) m = std::max(m, leaf_count(std::get<DecisionTree>(element)));
  return saturating_power(m, ensemble.elements.size());
}

DecisionTree dt_ensemble_to_dt(const Ensemble& ensemble, std::size_t node_cap) {
  if (ensemble.elements.empty()) throw Error(ErrorKind::validation, "ensemble has no elements");
  if (ensemble.elements.size() % 2 == 0) throw Error(ErrorKind::even_ensemble, "ensemble has an even size");
  std::vector<const DecisionTree*> trees;
  for (const ElementBody& element : ensemble.elements) {
    const auto* tree = std::get_if<DecisionTree>(&element);
    if (tree == nullptr) throw Error(ErrorKind::validation, "tree product needs an ensemble of decision trees");
    trees.push_back(tree);
  }
  const std::size_t bound = dt_product_bound(ensemble);
  if (bound > node_cap) {
    throw Error(ErrorKind::budget_exceeded,
                "product bound " + std::to_string(bound) + " exceeds the node cap " + std::to_string(node_cap));
  }

  DecisionTree out;
  out.num_features = ensemble.num_features;
  PartialExample path(ensemble.num_features);
  const std::size_t needed = ensemble.threshold();
  // Walks tree `i` from `id` under the assignment fixed so far; `ones` counts
  // the 1-leaves crossed in trees 0..i-1.
  auto build = [&](auto&& self, std::size_t i, std::uint32_t id, std::size_t ones) -> std::uint32_t {
    if (i == trees.size()) return out.add_leaf(ones >= needed ? 1 : 0);
    const DecisionTree& tree = *trees[i];
    const DtNode& node = tree.nodes[id];
    if (node.is_leaf()) {
      const std::size_t next = ones + static_cast<std::size_t>(node.label);
      return i + 1 == trees.size() ? self(self, i + 1, 0, next) : self(self, i + 1, trees[i + 1]->root, next);
    }
    if (path.defined(node.feature)) {
      return self(self, i, path.value(node.feature) == 0 ? node.zero : node.one, ones);
    }
    const std::uint32_t self_id = out.add_node(node.feature, 0, 0);
    path.set(node.feature, 0);
    const std::uint32_t zero = self(self, i, node.zero, ones);
    path.set(node.feature, 1);
    const std::uint32_t one = self(self, i, node.one, ones);
    path.erase(node.feature);
    out.nodes[self_id].zero = zero;
    out.nodes[self_id].one = one;
    return self_id;
  };
  out.root = build(build, 0, trees.front()->root, 0);
  return out;
}

}  // namespace xplain
