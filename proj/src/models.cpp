#include "xplain/models.hpp"

#include <algorithm>
#include <string>

#include "xplain/error.hpp"

namespace xplain {

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorKind::validation, message); }

void require_example(std::size_t num_features, const Example& e) {
  if (e.size() != num_features) {
    throw Error(ErrorKind::undefined_feature, "example assigns " + std::to_string(e.size()) +
                                                  " features, model has " + std::to_string(num_features));
  }
}

void validate_term(const Term& term, std::size_t num_features) {
  for (std::size_t i = 0; i < term.size(); ++i) {
    if (term[i].feature >= num_features) invalid("term references an unknown feature");
    if (term[i].value != 0 && term[i].value != 1) invalid("literal value must be 0 or 1");
    if (i > 0 && term[i - 1].feature >= term[i].feature) {
      if (term[i - 1].feature == term[i].feature) invalid("contradictory or repeated literal in term");
      invalid("term literals must be sorted by feature");
    }
  }
}

void validate_label(Label label) {
  if (label != 0 && label != 1) invalid("class label must be 0 or 1");
}

}  // namespace

// ---------------------------------------------------------------------------

DecisionTree DecisionTree::constant(std::size_t num_features, Label label) {
  DecisionTree tree;
  tree.num_features = num_features;
  tree.root = tree.add_leaf(label);
  return tree;
}

std::uint32_t DecisionTree::add_leaf(Label label) {
  DtNode node;
  node.label = label;
  nodes.push_back(node);
  return static_cast<std::uint32_t>(nodes.size() - 1);
}

std::uint32_t DecisionTree::add_node(FeatureId feature, std::uint32_t zero, std::uint32_t one) {
  nodes.push_back(DtNode{feature, zero, one, 0});
  return static_cast<std::uint32_t>(nodes.size() - 1);
}

std::vector<LeafPath> leaf_paths(const DecisionTree& tree) {
  std::vector<LeafPath> out;
  PartialExample path(tree.num_features);
  auto walk = [&](auto&& self, std::uint32_t id) -> void {
    const DtNode& node = tree.nodes[id];
    if (node.is_leaf()) {
      out.push_back(LeafPath{id, node.label, path});
      return;
    }
    const auto previous = path.value(node.feature);
    path.set(node.feature, 0);
    self(self, node.zero);
    path.set(node.feature, 1);
    self(self, node.one);
    if (previous < 0) {
      path.erase(node.feature);
    } else {
      path.set(node.feature, previous);
    }
  };
  walk(walk, tree.root);
  return out;
}

std::size_t leaf_count(const DecisionTree& tree) {
  return leaf_count(tree, 0) + leaf_count(tree, 1);
}

std::size_t leaf_count(const DecisionTree& tree, Label label) {
  std::size_t count = 0;
  std::vector<std::uint32_t> stack{tree.root};
  while (!stack.empty()) {
    const DtNode& node = tree.nodes[stack.back()];
    stack.pop_back();
    if (node.is_leaf()) {
      count += node.label == label ? 1 : 0;
    } else {
      stack.push_back(node.zero);
      stack.push_back(node.one);
    }
  }
  return count;
}

std::size_t mnl(const DecisionTree& tree) { return std::min(leaf_count(tree, 0), leaf_count(tree, 1)); }

std::size_t height(const DecisionTree& tree) {
  auto walk = [&](auto&& self, std::uint32_t id) -> std::size_t {
    const DtNode& node = tree.nodes[id];
    if (node.is_leaf()) return 0;
    return 1 + std::max(self(self, node.zero), self(self, node.one));
  };
  return walk(walk, tree.root);
}

// ---------------------------------------------------------------------------

Term normalize_term(Term term) {
  std::sort(term.begin(), term.end());
  term.erase(std::unique(term.begin(), term.end()), term.end());
  return term;
}

bool is_contradictory(const Term& term) {
  for (std::size_t i = 1; i < term.size(); ++i) {
    if (term[i - 1].feature == term[i].feature && term[i - 1].value != term[i].value) return true;
  }
  return false;
}

bool satisfies(const Example& e, const Term& term) {
  return std::all_of(term.begin(), term.end(), [&](const Literal& lit) { return e[lit.feature] == lit.value; });
}

FeatureSet term_features(const Term& term) {
  FeatureSet out;
  out.reserve(term.size());
  for (const Literal& lit : term) out.push_back(lit.feature);
  return normalize_feature_set(std::move(out));
}

std::size_t classifying_rule(const DecisionList& list, const Example& e) {
  for (std::size_t i = 0; i < list.rules.size(); ++i) {
    if (satisfies(e, list.rules[i].term)) return i;
  }
  return list.rules.size() - 1;
}

// ---------------------------------------------------------------------------

Obdd Obdd::constant(std::size_t num_features, Label label, std::vector<FeatureId> order) {
  Obdd obdd;
  obdd.num_features = num_features;
  obdd.source = sink(label);
  obdd.order = std::move(order);
  return obdd;
}

std::uint32_t Obdd::add_node(FeatureId feature, std::uint32_t zero, std::uint32_t one) {
  nodes.push_back(ObddNode{feature, zero, one});
  return static_cast<std::uint32_t>(nodes.size() - 1);
}

// ---------------------------------------------------------------------------

ModelKind Model::element_kind() const {
  if (const auto* ensemble = std::get_if<Ensemble>(&body)) {
    if (ensemble->elements.empty()) return ModelKind::ensemble;
    return static_cast<ModelKind>(ensemble->elements.front().index());
  }
  return kind();
}

const char* model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::dt: return "dt";
    case ModelKind::ds: return "ds";
    case ModelKind::dl: return "dl";
    case ModelKind::obdd: return "obdd";
    case ModelKind::ensemble: return "ensemble";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

Label classify(const DecisionTree& tree, const Example& e) {
  require_example(tree.num_features, e);
  std::uint32_t id = tree.root;
  while (!tree.nodes[id].is_leaf()) {
    const DtNode& node = tree.nodes[id];
    id = e[node.feature] == 0 ? node.zero : node.one;
  }
  return tree.nodes[id].label;
}

Label classify(const DecisionSet& set, const Example& e) {
  require_example(set.num_features, e);
  for (const Term& term : set.terms) {
    if (satisfies(e, term)) return 1 - set.default_class;
  }
  return set.default_class;
}

Label classify(const DecisionList& list, const Example& e) {
  require_example(list.num_features, e);
  return list.rules[classifying_rule(list, e)].label;
}

Label classify(const Obdd& obdd, const Example& e) {
  require_example(obdd.num_features, e);
  std::uint32_t id = obdd.source;
  while (!obdd.is_sink(id)) {
    const ObddNode& node = obdd.nodes[id];
    id = e[node.feature] == 0 ? node.zero : node.one;
  }
  return id == Obdd::kTrue ? 1 : 0;
}

Label classify(const ElementBody& element, const Example& e) {
  return std::visit([&](const auto& m) { return classify(m, e); }, element);
}

Label classify(const Ensemble& ensemble, const Example& e) {
  require_example(ensemble.num_features, e);
  std::size_t ones = 0;
  for (const ElementBody& element : ensemble.elements) ones += static_cast<std::size_t>(classify(element, e));
  return ones >= ensemble.threshold() ? 1 : 0;
}

Label classify(const Model& model, const Example& e) {
  require_example(model.num_features(), e);
  return std::visit([&](const auto& m) { return classify(m, e); }, model.body);
}

// ---------------------------------------------------------------------------

void validate(const DecisionTree& tree) {
  if (tree.nodes.empty()) invalid("decision tree has no nodes");
  if (tree.root >= tree.nodes.size()) invalid("decision tree root out of range");
  std::vector<std::uint8_t> seen(tree.nodes.size(), 0);
  std::vector<std::uint32_t> stack{tree.root};
  while (!stack.empty()) {
    const std::uint32_t id = stack.back();
    stack.pop_back();
    if (seen[id] != 0) invalid("decision tree node " + std::to_string(id) + " has several parents");
    seen[id] = 1;
    const DtNode& node = tree.nodes[id];
    if (node.is_leaf()) {
      validate_label(node.label);
      continue;
    }
    if (node.feature >= tree.num_features) invalid("decision tree tests an unknown feature");
    if (node.zero >= tree.nodes.size() || node.one >= tree.nodes.size()) invalid("decision tree child out of range");
    stack.push_back(node.zero);
    stack.push_back(node.one);
  }
}

void validate(const DecisionSet& set) {
  validate_label(set.default_class);
  for (const Term& term : set.terms) validate_term(term, set.num_features);
}

void validate(const DecisionList& list) {
  if (list.rules.empty()) invalid("decision list has no rules");
  if (!list.rules.back().term.empty()) invalid("the last rule of a decision list must have an empty term");
  for (const Rule& rule : list.rules) {
    validate_label(rule.label);
    validate_term(rule.term, list.num_features);
  }
}

void validate(const Obdd& obdd) {
  if (obdd.nodes.size() < 2 || !obdd.nodes[0].is_sink() || !obdd.nodes[1].is_sink()) {
    invalid("OBDD must start with its two sinks");
  }
  if (obdd.source >= obdd.nodes.size()) invalid("OBDD source out of range");
  for (std::size_t id = 2; id < obdd.nodes.size(); ++id) {
    const ObddNode& node = obdd.nodes[id];
    if (node.is_sink()) invalid("OBDD has a sink besides t0 and t1");
    if (node.feature >= obdd.num_features) invalid("OBDD tests an unknown feature");
    if (node.zero >= obdd.nodes.size() || node.one >= obdd.nodes.size()) invalid("OBDD arc out of range");
  }
  std::vector<std::uint8_t> in_order(obdd.num_features, 0);
  for (FeatureId f : obdd.order) {
    if (f >= obdd.num_features) invalid("OBDD order references an unknown feature");
    if (in_order[f] != 0) invalid("OBDD order repeats a feature");
    in_order[f] = 1;
  }
  check_ordered(obdd);
}

void validate(const Ensemble& ensemble) {
  if (ensemble.elements.empty()) invalid("ensemble has no elements");
  if (ensemble.elements.size() % 2 == 0) {
    throw Error(ErrorKind::even_ensemble,
                "ensemble has an even number of elements (" + std::to_string(ensemble.elements.size()) + ")");
  }
  const std::size_t kind = ensemble.elements.front().index();
  for (const ElementBody& element : ensemble.elements) {
    if (element.index() != kind) invalid("ensemble mixes model kinds");
    std::visit(
        [&](const auto& m) {
          if (m.num_features != ensemble.num_features) invalid("ensemble element over a different universe");
          validate(m);
        },
        element);
  }
  if (ensemble.shared_order) {
    if (kind != 3) invalid("shared_order is only meaningful for OBDD ensembles");
    std::vector<std::size_t> position(ensemble.num_features, SIZE_MAX);
    for (std::size_t i = 0; i < ensemble.shared_order->size(); ++i) {
      const FeatureId f = (*ensemble.shared_order)[i];
      if (f >= ensemble.num_features || position[f] != SIZE_MAX) invalid("invalid shared_order");
      position[f] = i;
    }
    for (const ElementBody& element : ensemble.elements) {
      Obdd copy = std::get<Obdd>(element);
      copy.order = *ensemble.shared_order;
      check_ordered(copy);
    }
  }
}

void validate(const Model& model) {
  std::visit(
      [&](const auto& m) {
        if (m.num_features != model.num_features()) invalid("model body disagrees with its feature space");
        validate(m);
      },
      model.body);
}

// ---------------------------------------------------------------------------

namespace {

// Rebuilds the subtree at `id` in preorder, following `fixed` wherever it is defined.
std::uint32_t rebuild(const DecisionTree& in, std::uint32_t id, PartialExample& fixed, bool assign_on_descent,
                      DecisionTree& out) {
  const DtNode& node = in.nodes[id];
  if (node.is_leaf()) return out.add_leaf(node.label);
  if (fixed.defined(node.feature)) {
    return rebuild(in, fixed.value(node.feature) == 0 ? node.zero : node.one, fixed, assign_on_descent, out);
  }
  const auto self = out.add_node(node.feature, 0, 0);
  if (assign_on_descent) fixed.set(node.feature, 0);
  const auto zero = rebuild(in, node.zero, fixed, assign_on_descent, out);
  if (assign_on_descent) fixed.set(node.feature, 1);
  const auto one = rebuild(in, node.one, fixed, assign_on_descent, out);
  if (assign_on_descent) fixed.erase(node.feature);
  out.nodes[self].zero = zero;
  out.nodes[self].one = one;
  return self;
}

}  // namespace

DecisionTree simplify_dt(const DecisionTree& tree) {
  DecisionTree out;
  out.num_features = tree.num_features;
  PartialExample fixed(tree.num_features);
  out.root = rebuild(tree, tree.root, fixed, true, out);
  return out;
}

DecisionTree restrict_dt(const DecisionTree& tree, const PartialExample& tau) {
  DecisionTree out;
  out.num_features = tree.num_features;
  PartialExample fixed = tau;
  out.root = rebuild(tree, tree.root, fixed, false, out);
  return out;
}

LabelSet reachable_leaves(const DecisionTree& tree, const PartialExample& tau) {
  LabelSet labels;
  std::vector<std::uint32_t> stack{tree.root};
  while (!stack.empty() && labels.size() < 2) {
    const DtNode& node = tree.nodes[stack.back()];
    stack.pop_back();
    if (node.is_leaf()) {
      labels.add(node.label);
      continue;
    }
    const int fixed = tau.value(node.feature);
    if (fixed != 1) stack.push_back(node.zero);
    if (fixed != 0) stack.push_back(node.one);
  }
  return labels;
}

LabelSet reachable_sinks(const Obdd& obdd, const PartialExample& tau) {
  LabelSet labels;
  std::vector<std::uint8_t> seen(obdd.nodes.size(), 0);
  std::vector<std::uint32_t> stack{obdd.source};
  seen[obdd.source] = 1;
  while (!stack.empty() && labels.size() < 2) {
    const std::uint32_t id = stack.back();
    stack.pop_back();
    if (obdd.is_sink(id)) {
      labels.add(id == Obdd::kTrue ? 1 : 0);
      continue;
    }
    const ObddNode& node = obdd.nodes[id];
    const int fixed = tau.value(node.feature);
    for (int b = 0; b < 2; ++b) {
      if (fixed >= 0 && fixed != b) continue;
      const std::uint32_t next = b == 0 ? node.zero : node.one;
      if (seen[next] == 0) {
        seen[next] = 1;
        stack.push_back(next);
      }
    }
  }
  return labels;
}

// ---------------------------------------------------------------------------

std::size_t element_size(const ElementBody& element) {
  struct Visitor {
    std::size_t operator()(const DecisionTree& t) const { return leaf_count(t); }
    std::size_t operator()(const DecisionSet& s) const {
      std::size_t total = 1;
      for (const Term& term : s.terms) total += term.size();
      return total;
    }
    std::size_t operator()(const DecisionList& l) const {
      std::size_t total = 0;
      for (const Rule& rule : l.rules) total += rule.term.size() + 1;
      return total;
    }
    std::size_t operator()(const Obdd& o) const { return obdd_size(o); }
  };
  return std::visit(Visitor{}, element);
}

Parameters measure_parameters(const Model& model) {
  std::vector<const ElementBody*> elements;
  std::vector<ElementBody> single;
  if (const auto* ensemble = std::get_if<Ensemble>(&model.body)) {
    for (const ElementBody& element : ensemble->elements) elements.push_back(&element);
  } else {
    single.push_back(std::visit(
        [](const auto& m) -> ElementBody {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Ensemble>) {
            return DecisionTree{};
          } else {
            return m;
          }
        },
        model.body));
    elements.push_back(&single.front());
  }

  Parameters p;
  p.ens_size = elements.size();
  auto raise = [](std::optional<std::size_t>& slot, std::size_t value) {
    slot = slot ? std::max(*slot, value) : value;
  };
  for (const ElementBody* element : elements) {
    p.size_elem = std::max(p.size_elem, element_size(*element));
    if (const auto* t = std::get_if<DecisionTree>(element)) {
      raise(p.mnl_size, mnl(*t));
    } else if (const auto* s = std::get_if<DecisionSet>(element)) {
      raise(p.terms_elem, s->terms.size());
      raise(p.term_size, 0);
      for (const Term& term : s->terms) raise(p.term_size, term.size());
    } else if (const auto* l = std::get_if<DecisionList>(element)) {
      raise(p.terms_elem, l->rules.size());
      raise(p.term_size, 0);
      for (const Rule& rule : l->rules) raise(p.term_size, rule.term.size());
    } else if (const auto* o = std::get_if<Obdd>(element)) {
      raise(p.width_elem, obdd_width(complete_obdd(*o)));
    }
  }
  return p;
}

}  // namespace xplain
