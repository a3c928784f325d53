#include "xplain/gadgets.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <unordered_map>

#include "xplain/error.hpp"

namespace xplain {

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorKind::validation, message); }

std::size_t choose2(std::size_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

// Copies `src` below `leaf` of `dst`, replacing the leaf.
void graft(DecisionTree& dst, std::uint32_t leaf, const DecisionTree& src) {
  const auto offset = static_cast<std::uint32_t>(dst.nodes.size());
  for (DtNode node : src.nodes) {
    if (!node.is_leaf()) {
      node.zero += offset;
      node.one += offset;
    }
    dst.nodes.push_back(node);
  }
  dst.nodes[leaf] = dst.nodes[offset + src.root];
}

std::uint32_t leaf_of(const DecisionTree& tree, const Example& e) {
  std::uint32_t id = tree.root;
  while (!tree.nodes[id].is_leaf()) id = e[tree.nodes[id].feature] == 0 ? tree.nodes[id].zero : tree.nodes[id].one;
  return id;
}

// Complete tree of the given height over fresh features starting at `next`;
// leaves are 0-leaves listed left to right in `leaves`.
std::uint32_t complete_tree(DecisionTree& tree, std::size_t height, FeatureId& next,
                            std::vector<std::uint32_t>& leaves) {
  if (height == 0) {
    const std::uint32_t leaf = tree.add_leaf(0);
    leaves.push_back(leaf);
    return leaf;
  }
  const std::uint32_t id = tree.add_node(next++, 0, 0);
  const std::uint32_t zero = complete_tree(tree, height - 1, next, leaves);
  const std::uint32_t one = complete_tree(tree, height - 1, next, leaves);
  tree.nodes[id].zero = zero;
  tree.nodes[id].one = one;
  return id;
}

std::size_t complete_tree_features(std::size_t height) { return (std::size_t{1} << height) - 1; }

std::size_t ceil_log2(std::size_t x) {
  std::size_t h = 0;
  while ((std::size_t{1} << h) < x) ++h;
  return h;
}

std::vector<FeatureId> vertex_features(const MccInstance& g, std::size_t part) {
  std::vector<FeatureId> out;
  for (std::uint32_t v : g.members(part)) out.push_back(v);
  return out;
}

Example indicator(std::size_t n, std::initializer_list<FeatureId> ones) {
  Example e(n);
  for (FeatureId f : ones) e.set(f, 1);
  return e;
}

FeatureSpace vertex_space(const MccInstance& g) { return FeatureSpace(g.names); }

Model ensemble_model(FeatureSpace space, std::vector<ElementBody> elements,
                     std::optional<std::vector<FeatureId>> shared_order = std::nullopt) {
  Ensemble ensemble;
  ensemble.num_features = space.size();
  ensemble.elements = std::move(elements);
  ensemble.shared_order = std::move(shared_order);
  Model model{std::move(space), std::move(ensemble)};
  validate(model);
  return model;
}

ExplanationQuery hom_query(std::size_t n, std::size_t k) {
  return ExplanationQuery::local(XpKind::lCXp, Example(n), k);
}

Obdd obdd_single(std::size_t n, FeatureId f) {
  Obdd o;
  o.num_features = n;
  o.source = o.add_node(f, Obdd::kFalse, Obdd::kTrue);
  o.order = {f};
  return o;
}

// Positive iff e(f1) = 0 or e(f2) = 0, reading f1 first.
Obdd obdd_nand(std::size_t n, FeatureId f1, FeatureId f2) {
  Obdd o;
  o.num_features = n;
  const std::uint32_t second = o.add_node(f2, Obdd::kTrue, Obdd::kFalse);
  o.source = o.add_node(f1, Obdd::kTrue, second);
  o.order = {f1, f2};
  return canonical_obdd(o);
}

}  // namespace

// ---------------------------------------------------------------------------

bool MccInstance::adjacent(std::uint32_t u, std::uint32_t v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

std::vector<std::uint32_t> MccInstance::members(std::size_t i) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < part.size(); ++v) {
    if (part[v] == i) out.push_back(v);
  }
  return out;
}

MccInstance MccInstance::make(std::vector<std::size_t> part, std::size_t k,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
  MccInstance g;
  for (std::size_t v = 0; v < part.size(); ++v) g.names.push_back("v" + std::to_string(v + 1));
  g.part = std::move(part);
  g.k = k;
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  validate(g);
  return g;
}

void validate(const MccInstance& g) {
  if (g.part.size() != g.names.size()) invalid("every vertex needs a part");
  std::set<std::string> seen;
  for (const std::string& name : g.names) {
    if (!seen.insert(name).second) invalid("duplicate vertex " + name);
  }
  for (std::size_t p : g.part) {
    if (p >= g.k) invalid("part index out of range");
  }
  for (const auto& [u, v] : g.edges) {
    if (u >= v || v >= g.size()) invalid("edges must be pairs of distinct vertices");
    if (g.part[u] == g.part[v]) invalid("edge inside a part: the colouring is not proper");
  }
  if (!std::is_sorted(g.edges.begin(), g.edges.end()) ||
      std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end()) {
    invalid("edges must be sorted and distinct");
  }
}

MccInstance mcc_from_json(const nlohmann::json& json) {
  try {
    MccInstance g;
    std::unordered_map<std::string, std::uint32_t> index;
    const auto& parts = json.at("parts");
    g.k = parts.size();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (const auto& name : parts[i]) {
        const std::string text = name.get<std::string>();
        if (index.count(text) != 0) invalid("vertex " + text + " listed twice");
        index.emplace(text, static_cast<std::uint32_t>(g.names.size()));
        g.names.push_back(text);
        g.part.push_back(i);
      }
    }
    if (json.contains("edges")) {
      for (const auto& edge : json.at("edges")) {
        if (edge.size() != 2) invalid("an edge has two endpoints");
        auto endpoint = [&](const nlohmann::json& name) {
          const auto it = index.find(name.get<std::string>());
          if (it == index.end()) throw Error(ErrorKind::undefined_feature, "unknown vertex " + name.get<std::string>());
          return it->second;
        };
        std::uint32_t u = endpoint(edge[0]);
        std::uint32_t v = endpoint(edge[1]);
        if (u > v) std::swap(u, v);
        g.edges.emplace_back(u, v);
      }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    validate(g);
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::parse, std::string("graph: ") + ex.what());
  }
}

nlohmann::json mcc_to_json(const MccInstance& g) {
  nlohmann::json parts = nlohmann::json::array();
  for (std::size_t i = 0; i < g.k; ++i) {
    nlohmann::json names = nlohmann::json::array();
    for (std::uint32_t v : g.members(i)) names.push_back(g.names[v]);
    parts.push_back(std::move(names));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({g.names[u], g.names[v]});
  return {{"parts", std::move(parts)}, {"edges", std::move(edges)}};
}

bool has_multicolored_clique(const MccInstance& g) {
  std::vector<std::vector<std::uint32_t>> parts;
  for (std::size_t i = 0; i < g.k; ++i) parts.push_back(g.members(i));
  std::vector<std::uint32_t> chosen;
  auto search = [&](auto&& self, std::size_t i) -> bool {
    if (i == parts.size()) return true;
    for (std::uint32_t v : parts[i]) {
      if (std::all_of(chosen.begin(), chosen.end(), [&](std::uint32_t u) { return g.adjacent(u, v); })) {
        chosen.push_back(v);
        if (self(self, i + 1)) return true;
        chosen.pop_back();
      }
    }
    return false;
  };
  return search(search, 0);
}

// ---------------------------------------------------------------------------

DecisionTree dt_from_examples(const std::vector<Example>& examples, const std::vector<FeatureId>& features,
                              std::size_t num_features) {
  DecisionTree tree = DecisionTree::constant(num_features, 0);
  const std::size_t n = features.size();
  for (const Example& x : examples) {
    std::uint32_t id = tree.root;
    std::size_t depth = 0;
    while (!tree.nodes[id].is_leaf()) {
      id = x[tree.nodes[id].feature] == 0 ? tree.nodes[id].zero : tree.nodes[id].one;
      ++depth;
    }
    if (tree.nodes[id].label == 1) continue;
    // Chain for features[depth..]: the x-child continues, the other child rejects.
    std::uint32_t at = id;
    for (std::size_t d = depth; d < n; ++d) {
      const FeatureId f = features[d];
      const std::uint32_t reject = tree.add_leaf(0);
      const std::uint32_t next = tree.add_leaf(0);
      tree.nodes[at] = DtNode{f, x[f] == 0 ? next : reject, x[f] == 0 ? reject : next, 0};
      at = next;
    }
    tree.nodes[at].label = 1;
  }
  return simplify_dt(tree);
}

GadgetInstance gen_hitting_set_laxp(std::size_t universe, const std::vector<std::vector<std::size_t>>& sets,
                                    std::size_t k) {
  if (sets.empty()) invalid("the set family is empty");
  std::vector<std::string> names;
  for (std::size_t u = 1; u <= universe; ++u) names.push_back("u" + std::to_string(u));
  std::vector<Example> examples;
  for (const auto& set : sets) {
    Example e(universe);
    for (std::size_t u : set) {
      if (u < 1 || u > universe) invalid("set element outside the universe");
      e.set(static_cast<FeatureId>(u - 1), 1);
    }
    examples.push_back(std::move(e));
  }
  DecisionTree tree = dt_from_examples(examples, all_features(universe), universe);
  Model model{FeatureSpace(names), std::move(tree)};
  validate(model);
  return {std::move(model), ExplanationQuery::local(XpKind::lAXp, Example(universe), k)};
}

GadgetInstance gen_mcc_gaxp_dt(const MccInstance& g, std::size_t max_k) {
  const std::size_t k = g.k;
  if (k < 2) invalid("the clique size must be at least 2");
  if (k > max_k) {
    throw Error(ErrorKind::budget_exceeded,
                "clique size " + std::to_string(k) + " exceeds the generator cap " + std::to_string(max_k));
  }
  const std::size_t n = g.size();
  const std::size_t pad_height = ceil_log2(k * (k - 1));
  const std::size_t copies = std::size_t{1} << k;
  const std::size_t aux = complete_tree_features(k) + copies * complete_tree_features(pad_height);
  const std::size_t total = n + aux;

  // T_{i,j} for every ordered pair of distinct parts.
  std::vector<DecisionTree> pair_trees;
  for (std::size_t i = 0; i < k; ++i) {
    const auto part_i = vertex_features(g, i);
    std::vector<Example> accepted{Example(total)};
    for (FeatureId v : part_i) accepted.push_back(indicator(total, {v}));
    const DecisionTree tree_i = dt_from_examples(accepted, part_i, total);
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      DecisionTree tree = tree_i;
      for (FeatureId v : part_i) {
        std::vector<FeatureId> around;
        for (std::uint32_t u : g.members(j)) {
          if (g.adjacent(v, u)) around.push_back(u);
        }
        graft(tree, leaf_of(tree, indicator(total, {v})), dt_from_examples({Example(total)}, around, total));
      }
      pair_trees.push_back(simplify_dt(tree));
    }
  }

  DecisionTree tree;
  tree.num_features = total;
  FeatureId next = static_cast<FeatureId>(n);
  std::vector<std::uint32_t> top_leaves;
  tree.root = complete_tree(tree, k, next, top_leaves);
  for (std::uint32_t top : top_leaves) {
    DecisionTree pad;
    pad.num_features = total;
    std::vector<std::uint32_t> pad_leaves;
    pad.root = complete_tree(pad, pad_height, next, pad_leaves);
    for (std::size_t p = 0; p < pair_trees.size(); ++p) graft(pad, pad_leaves[p], pair_trees[p]);
    graft(tree, top, pad);
  }

  std::vector<std::string> names = g.names;
  for (std::size_t a = 1; a <= aux; ++a) names.push_back("aux" + std::to_string(a));
  Model model{FeatureSpace(names), simplify_dt(tree)};
  validate(model);
  return {std::move(model), ExplanationQuery::global(XpKind::gAXp, 0, k)};
}

GadgetInstance gen_mcc_dt_ensemble(const MccInstance& g) {
  const std::size_t k = g.k;
  if (k < 1) invalid("the graph needs at least one part");
  const std::size_t n = g.size();
  std::vector<ElementBody> elements;
  for (std::size_t i = 0; i < k; ++i) {
    const auto part_i = vertex_features(g, i);
    std::vector<Example> accepted;
    for (FeatureId v : part_i) accepted.push_back(indicator(n, {v}));
    elements.emplace_back(dt_from_examples(accepted, part_i, n));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      auto both = vertex_features(g, i);
      const auto part_j = vertex_features(g, j);
      both.insert(both.end(), part_j.begin(), part_j.end());
      std::sort(both.begin(), both.end());
      std::vector<Example> accepted;
      for (const auto& [u, v] : g.edges) {
        const bool forward = g.part[u] == i && g.part[v] == j;
        const bool backward = g.part[u] == j && g.part[v] == i;
        if (forward || backward) accepted.push_back(indicator(n, {u, v}));
      }
      elements.emplace_back(dt_from_examples(accepted, both, n));
    }
  }
  for (std::size_t c = 0; c + 1 < k + choose2(k); ++c) elements.emplace_back(DecisionTree::constant(n, 0));
  return {ensemble_model(vertex_space(g), std::move(elements)), hom_query(n, k)};
}

GadgetInstance gen_maj_hom(const MccInstance& g, HomFamily family) {
  const std::size_t n = g.size();
  const std::size_t k = g.k;
  auto constant = [&](Label label) -> ElementBody {
    switch (family) {
      case HomFamily::dt: return DecisionTree::constant(n, label);
      case HomFamily::ds: return DecisionSet{n, {}, label};
      case HomFamily::obdd: return Obdd::constant(n, label);
    }
    return DecisionTree::constant(n, label);
  };
  auto single = [&](FeatureId f) -> ElementBody {
    switch (family) {
      case HomFamily::dt: {
        DecisionTree t;
        t.num_features = n;
        const auto zero = t.add_leaf(0);
        const auto one = t.add_leaf(1);
        t.root = t.add_node(f, zero, one);
        return t;
      }
      case HomFamily::ds: return DecisionSet{n, {Term{Literal{f, 1}}}, 0};
      case HomFamily::obdd: return obdd_single(n, f);
    }
    return DecisionTree{};
  };
  auto nand = [&](FeatureId f1, FeatureId f2) -> ElementBody {
    switch (family) {
      case HomFamily::dt: {
        DecisionTree t;
        t.num_features = n;
        const auto left = t.add_leaf(1);
        const auto a = t.add_leaf(1);
        const auto b = t.add_leaf(0);
        const auto second = t.add_node(f2, a, b);
        t.root = t.add_node(f1, left, second);
        return simplify_dt(t);
      }
      case HomFamily::ds: return DecisionSet{n, {Term{Literal{f1, 1}, Literal{f2, 1}}}, 1};
      case HomFamily::obdd: return obdd_nand(n, f1, f2);
    }
    return DecisionTree{};
  };

  std::vector<ElementBody> elements;
  std::size_t non_edges = 0;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (g.adjacent(u, v)) continue;
      elements.push_back(nand(u, v));
      ++non_edges;
    }
  }
  for (std::uint32_t v = 0; v < n; ++v) elements.push_back(single(v));
  const auto padding = static_cast<long long>(non_edges) - static_cast<long long>(n) + 2 * static_cast<long long>(k) - 1;
  // A negative count is made up with constant-1 elements, which keeps the
  // size odd and the decision threshold aligned with the clique size.
  for (long long c = 0; c < padding; ++c) elements.push_back(constant(0));
  for (long long c = padding; c < 0; ++c) elements.push_back(constant(1));

  std::optional<std::vector<FeatureId>> order;
  if (family == HomFamily::obdd) order = all_features(n);
  return {ensemble_model(vertex_space(g), std::move(elements), std::move(order)), hom_query(n, k)};
}

TautInstance gen_taut_ds(const Dnf& psi) {
  const std::size_t n = psi.variables.size();
  DecisionSet set{n, {}, 0};
  bool zero_satisfies = false;
  for (const Term& raw : psi.terms) {
    Term term = normalize_term(raw);
    for (const Literal& lit : term) {
      if (lit.feature >= n) throw Error(ErrorKind::undefined_feature, "term uses an unknown variable");
    }
    if (term.size() > 3) invalid("terms of a 3-DNF have at most three literals");
    if (is_contradictory(term)) continue;
    if (std::all_of(term.begin(), term.end(), [](const Literal& lit) { return lit.value == 0; })) zero_satisfies = true;
    set.terms.push_back(std::move(term));
  }
  Model model{FeatureSpace(psi.variables), std::move(set)};
  validate(model);
  TautInstance out{{std::move(model), ExplanationQuery::local(XpKind::lAXp, Example(n), 0)}, !zero_satisfies};
  return out;
}

GadgetInstance gen_mcc_ds(const MccInstance& g) {
  const std::size_t n = g.size();
  DecisionSet set{n, {}, 1};
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (!g.adjacent(u, v)) set.terms.push_back(Term{Literal{u, 1}, Literal{v, 1}});
    }
  }
  for (std::size_t i = 0; i < g.k; ++i) {
    Term term;
    for (std::uint32_t v : g.members(i)) term.push_back(Literal{v, 0});
    set.terms.push_back(std::move(term));
  }
  Model model{vertex_space(g), std::move(set)};
  validate(model);
  return {std::move(model), hom_query(n, g.k)};
}

GadgetInstance gen_mcc_ds_ensemble(const MccInstance& g) {
  const std::size_t n = g.size();
  std::vector<ElementBody> elements;
  DecisionSet first{n, {}, 1};
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (!g.adjacent(u, v)) first.terms.push_back(Term{Literal{u, 1}, Literal{v, 1}});
    }
  }
  elements.emplace_back(std::move(first));
  for (std::size_t i = 0; i < g.k; ++i) {
    DecisionSet part{n, {}, 0};
    for (std::uint32_t v : g.members(i)) part.terms.push_back(Term{Literal{v, 1}});
    elements.emplace_back(std::move(part));
  }
  for (std::size_t i = 0; i < g.k; ++i) elements.emplace_back(DecisionSet{n, {}, 0});
  return {ensemble_model(vertex_space(g), std::move(elements)), hom_query(n, g.k)};
}

}  // namespace xplain
