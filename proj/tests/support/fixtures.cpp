#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace xplain::testing {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

int coin(Rng& rng) { return static_cast<int>(uniform(rng, 0, 1)); }

std::vector<FeatureId> permutation(Rng& rng, std::size_t n) {
  std::vector<FeatureId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

Term random_term(Rng& rng, std::size_t n, std::size_t max_term) {
  const std::size_t size = uniform(rng, 1, std::min(max_term, n));
  std::vector<FeatureId> features = permutation(rng, n);
  Term term;
  for (std::size_t i = 0; i < size; ++i) term.push_back(Literal{features[i], coin(rng)});
  return normalize_term(std::move(term));
}

MccInstance named(std::vector<std::string> names, std::vector<std::size_t> part, std::size_t k,
                  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
  MccInstance g = MccInstance::make(std::move(part), k, std::move(edges));
  g.names = std::move(names);
  return g;
}

}  // namespace

DecisionTree and_tree() {
  DecisionTree t;
  t.num_features = 2;
  const auto zero = t.add_leaf(0);
  const auto low = t.add_leaf(0);
  const auto high = t.add_leaf(1);
  const auto second = t.add_node(1, low, high);
  t.root = t.add_node(0, zero, second);
  return t;
}

Model and_tree_model() { return single(and_tree()); }

Obdd xor_obdd() {
  Obdd o;
  o.num_features = 2;
  const auto a = o.add_node(1, Obdd::kFalse, Obdd::kTrue);
  const auto b = o.add_node(1, Obdd::kTrue, Obdd::kFalse);
  o.source = o.add_node(0, a, b);
  o.order = {0, 1};
  return canonical_obdd(o);
}

Obdd and_obdd() {
  Obdd o;
  o.num_features = 2;
  const auto b = o.add_node(1, Obdd::kFalse, Obdd::kTrue);
  o.source = o.add_node(0, Obdd::kFalse, b);
  o.order = {0, 1};
  return canonical_obdd(o);
}

DecisionTree stump(std::size_t n, FeatureId f) {
  DecisionTree t;
  t.num_features = n;
  const auto zero = t.add_leaf(0);
  const auto one = t.add_leaf(1);
  t.root = t.add_node(f, zero, one);
  return t;
}

Obdd single_node_obdd(std::size_t n, FeatureId f) {
  Obdd o;
  o.num_features = n;
  o.source = o.add_node(f, Obdd::kFalse, Obdd::kTrue);
  o.order = {f};
  return o;
}

DecisionList single_rule_dl(std::size_t n, FeatureId f) {
  DecisionList l;
  l.num_features = n;
  l.rules.push_back(Rule{{Literal{f, 1}}, 1});
  l.rules.push_back(Rule{{}, 0});
  return l;
}

DecisionList running_list() {
  DecisionList l;
  l.num_features = 3;
  l.rules.push_back(Rule{{Literal{0, 1}, Literal{1, 1}}, 0});
  l.rules.push_back(Rule{{Literal{0, 0}, Literal{2, 0}}, 1});
  l.rules.push_back(Rule{{Literal{1, 0}, Literal{2, 1}}, 0});
  l.rules.push_back(Rule{{}, 1});
  return l;
}

Model running_model() { return Model{FeatureSpace({"x", "y", "z"}), running_list()}; }

Example running_example() { return Example{0, 0, 1}; }

Model single(DecisionTree t) {
  const std::size_t n = t.num_features;
  return Model{FeatureSpace::numbered(n), std::move(t)};
}

Model single(Obdd o) {
  const std::size_t n = o.num_features;
  return Model{FeatureSpace::numbered(n), std::move(o)};
}

Model single(DecisionList l) {
  const std::size_t n = l.num_features;
  return Model{FeatureSpace::numbered(n), std::move(l)};
}

Model single(DecisionSet s) {
  const std::size_t n = s.num_features;
  return Model{FeatureSpace::numbered(n), std::move(s)};
}

Model ensemble_model(std::size_t n, std::vector<ElementBody> elements,
                     std::optional<std::vector<FeatureId>> shared_order) {
  Ensemble e;
  e.num_features = n;
  e.elements = std::move(elements);
  e.shared_order = std::move(shared_order);
  return Model{FeatureSpace::numbered(n), std::move(e)};
}

DecisionTree random_dt(Rng& rng, std::size_t n, std::size_t max_leaves) {
  DecisionTree t = DecisionTree::constant(n, coin(rng));
  if (n == 0) return t;
  struct Open {
    std::uint32_t leaf;
    std::vector<FeatureId> used;
  };
  std::vector<Open> open{{t.root, {}}};
  const std::size_t target = uniform(rng, 1, std::max<std::size_t>(1, max_leaves));
  std::size_t leaves = 1;
  while (leaves < target && !open.empty()) {
    const std::size_t pick = uniform(rng, 0, open.size() - 1);
    Open chosen = open[pick];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    std::vector<FeatureId> free;
    for (FeatureId f = 0; f < n; ++f) {
      if (std::find(chosen.used.begin(), chosen.used.end(), f) == chosen.used.end()) free.push_back(f);
    }
    if (free.empty()) continue;
    const FeatureId f = free[uniform(rng, 0, free.size() - 1)];
    const auto zero = t.add_leaf(coin(rng));
    const auto one = t.add_leaf(coin(rng));
    t.nodes[chosen.leaf] = DtNode{f, zero, one, 0};
    chosen.used.push_back(f);
    open.push_back({zero, chosen.used});
    open.push_back({one, chosen.used});
    ++leaves;
  }
  return simplify_dt(t);
}

Obdd random_complete_obdd(Rng& rng, std::size_t n, std::size_t max_width,
                          std::optional<std::vector<FeatureId>> order) {
  Obdd o;
  o.num_features = n;
  o.order = order ? *order : permutation(rng, n);
  if (n == 0) {
    o.source = Obdd::sink(coin(rng));
    return o;
  }
  std::vector<std::uint32_t> below{Obdd::kFalse, Obdd::kTrue};
  for (std::size_t l = n; l-- > 0;) {
    const std::size_t width = l == 0 ? 1 : uniform(rng, 1, max_width);
    std::vector<std::uint32_t> here;
    for (std::size_t i = 0; i < width; ++i) {
      here.push_back(o.add_node(o.order[l], below[uniform(rng, 0, below.size() - 1)],
                                below[uniform(rng, 0, below.size() - 1)]));
    }
    below = std::move(here);
  }
  o.source = below.front();
  return canonical_obdd(o);
}

Obdd random_skipping_obdd(Rng& rng, std::size_t n, std::size_t max_width) {
  Obdd o;
  o.num_features = n;
  o.order = permutation(rng, n);
  std::vector<std::uint32_t> later{Obdd::kFalse, Obdd::kTrue};
  std::vector<std::uint32_t> top;
  for (std::size_t l = n; l-- > 0;) {
    const std::size_t width = uniform(rng, 1, max_width);
    top.clear();
    for (std::size_t i = 0; i < width; ++i) {
      top.push_back(o.add_node(o.order[l], later[uniform(rng, 0, later.size() - 1)],
                               later[uniform(rng, 0, later.size() - 1)]));
    }
    later.insert(later.end(), top.begin(), top.end());
  }
  o.source = top.empty() ? Obdd::kFalse : top.front();
  return canonical_obdd(o);
}

DecisionList random_dl(Rng& rng, std::size_t n, std::size_t max_rules, std::size_t max_term) {
  DecisionList l;
  l.num_features = n;
  const std::size_t rules = uniform(rng, 1, max_rules);
  for (std::size_t r = 0; r + 1 < rules && n > 0; ++r) l.rules.push_back(Rule{random_term(rng, n, max_term), coin(rng)});
  l.rules.push_back(Rule{{}, coin(rng)});
  return l;
}

DecisionSet random_ds(Rng& rng, std::size_t n, std::size_t max_terms, std::size_t max_term) {
  DecisionSet s;
  s.num_features = n;
  s.default_class = coin(rng);
  const std::size_t terms = uniform(rng, 0, max_terms);
  for (std::size_t t = 0; t < terms && n > 0; ++t) s.terms.push_back(random_term(rng, n, max_term));
  return s;
}

Example random_example(Rng& rng, std::size_t n) {
  Example e(n);
  for (FeatureId f = 0; f < n; ++f) e.set(f, coin(rng));
  return e;
}

PartialExample random_partial(Rng& rng, std::size_t n) {
  PartialExample tau(n);
  for (FeatureId f = 0; f < n; ++f) {
    const std::size_t r = uniform(rng, 0, 2);
    if (r < 2) tau.set(f, static_cast<int>(r));
  }
  return tau;
}

Model random_model(Rng& rng, ModelKind kind, std::size_t n, bool ensemble) {
  auto element = [&](const std::vector<FeatureId>& order) -> ElementBody {
    switch (kind) {
      case ModelKind::dt: return random_dt(rng, n, 8);
      case ModelKind::ds: return random_ds(rng, n, 4, 3);
      case ModelKind::dl: return random_dl(rng, n, 5, 3);
      default: return random_complete_obdd(rng, n, 3, order);
    }
  };
  const std::vector<FeatureId> order = permutation(rng, n);
  if (!ensemble) {
    ElementBody body = element(order);
    return std::visit([&](auto&& b) { return Model{FeatureSpace::numbered(n), b}; }, body);
  }
  std::vector<ElementBody> elements;
  for (int i = 0; i < 3; ++i) elements.push_back(element(order));
  std::optional<std::vector<FeatureId>> shared;
  if (kind == ModelKind::obdd) shared = order;
  return ensemble_model(n, std::move(elements), shared);
}

MccInstance random_mcc(Rng& rng, std::size_t k, std::size_t max_n) {
  const std::size_t n = uniform(rng, k, std::max(k, max_n));
  std::vector<std::size_t> part(n);
  for (std::size_t v = 0; v < n; ++v) part[v] = v < k ? v : uniform(rng, 0, k - 1);
  std::shuffle(part.begin(), part.end(), rng);
  const double p = std::uniform_real_distribution<double>(0.3, 0.95)(rng);
  std::bernoulli_distribution edge(p);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (part[u] != part[v] && edge(rng)) edges.emplace_back(u, v);
    }
  }
  return MccInstance::make(std::move(part), k, std::move(edges));
}

MccInstance triangle() { return named({"a", "b", "c"}, {0, 1, 2}, 3, {{0, 1}, {1, 2}, {0, 2}}); }

MccInstance path3() { return named({"a", "b", "c"}, {0, 1, 2}, 3, {{0, 1}, {1, 2}}); }

MccInstance single_edge() { return named({"a", "b"}, {0, 1}, 2, {{0, 1}}); }

std::size_t min_hitting_set(std::size_t universe, const std::vector<std::vector<std::size_t>>& sets) {
  std::size_t best = universe + 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe); ++mask) {
    const bool hits = std::all_of(sets.begin(), sets.end(), [&](const std::vector<std::size_t>& set) {
      return std::any_of(set.begin(), set.end(), [&](std::size_t u) { return (mask >> (u - 1)) & 1U; });
    });
    if (hits) best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcountll(mask)));
  }
  return best;
}

std::vector<Example> all_examples(std::size_t n) {
  std::vector<Example> out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) out.push_back(Example::from_bits(x, n));
  return out;
}

}  // namespace xplain::testing
