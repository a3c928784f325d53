#include <string>
#include <unordered_map>

#include "xplain/error.hpp"
#include "xplain/explain.hpp"

namespace xplain {

namespace {

TruthTable cube(std::size_t n, const Term& term) {
  TruthTable table = TruthTable::constant(n, true);
  for (const Literal& lit : term) table.restrict_to(lit.feature, lit.value == 1);
  return table;
}

TruthTable tree_table(const DecisionTree& tree, std::size_t n) {
  TruthTable result = TruthTable::constant(n, false);
  auto walk = [&](auto&& self, std::uint32_t id, const TruthTable& reach) -> void {
    const DtNode& node = tree.nodes[id];
    if (node.is_leaf()) {
      if (node.label == 1) result |= reach;
      return;
    }
    TruthTable zero = reach;
    zero.restrict_to(node.feature, false);
    if (zero.any()) self(self, node.zero, zero);
    TruthTable one = reach;
    one.restrict_to(node.feature, true);
    if (one.any()) self(self, node.one, one);
  };
  walk(walk, tree.root, TruthTable::constant(n, true));
  return result;
}

TruthTable set_table(const DecisionSet& set, std::size_t n) {
  TruthTable covered = TruthTable::constant(n, false);
  for (const Term& term : set.terms) covered |= cube(n, term);
  if (set.default_class == 1) covered.invert();
  return covered;
}

TruthTable list_table(const DecisionList& list, std::size_t n) {
  TruthTable result = TruthTable::constant(n, false);
  TruthTable open = TruthTable::constant(n, true);
  for (const Rule& rule : list.rules) {
    TruthTable hit = cube(n, rule.term);
    hit &= open;
    if (rule.label == 1) result |= hit;
    open.and_not(hit);
  }
  return result;
}

TruthTable obdd_table(const Obdd& obdd, std::size_t n) {
  std::unordered_map<std::uint32_t, TruthTable> memo;
  memo.emplace(Obdd::kFalse, TruthTable::constant(n, false));
  memo.emplace(Obdd::kTrue, TruthTable::constant(n, true));
  auto eval = [&](auto&& self, std::uint32_t id) -> const TruthTable& {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const ObddNode& node = obdd.nodes[id];
    TruthTable zero = self(self, node.zero);
    zero.restrict_to(node.feature, false);
    TruthTable one = self(self, node.one);
    one.restrict_to(node.feature, true);
    zero |= one;
    return memo.emplace(id, std::move(zero)).first->second;
  };
  return eval(eval, obdd.source);
}

}  // namespace

TruthTable element_truth_table(const ElementBody& element, std::size_t n) {
  struct Visitor {
    std::size_t n;
    TruthTable operator()(const DecisionTree& t) const { return tree_table(t, n); }
    TruthTable operator()(const DecisionSet& s) const { return set_table(s, n); }
    TruthTable operator()(const DecisionList& l) const { return list_table(l, n); }
    TruthTable operator()(const Obdd& o) const { return obdd_table(o, n); }
  };
  return std::visit(Visitor{n}, element);
}

TruthTable model_truth_table(const Model& model, std::size_t guard) {
  const std::size_t n = model.num_features();
  if (n > guard) {
    throw Error(ErrorKind::too_large, "model has " + std::to_string(n) + " features, oracle guard is " +
                                          std::to_string(guard));
  }
  if (const auto* ensemble = std::get_if<Ensemble>(&model.body)) {
    std::vector<TruthTable> tables;
    tables.reserve(ensemble->elements.size());
    for (const ElementBody& element : ensemble->elements) tables.push_back(element_truth_table(element, n));
    std::vector<const TruthTable*> rows;
    for (const TruthTable& table : tables) rows.push_back(&table);
    return threshold(rows, ensemble->threshold());
  }
  return std::visit(
      [&](const auto& m) -> TruthTable {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Ensemble>) {
          return TruthTable{};
        } else {
          return element_truth_table(ElementBody{m}, n);
        }
      },
      model.body);
}

}  // namespace xplain
