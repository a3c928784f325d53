#include <algorithm>
#include <functional>
#include <string>

#include "xplain/error.hpp"
#include "xplain/gadgets.hpp"
#include "xplain/obdd.hpp"

namespace xplain {

namespace {

constexpr std::size_t kNoTrack = static_cast<std::size_t>(-1);

// Layered automaton over `order`: the vertex at level l and track t reads
// order[l] and moves to step(l, t, bit) at level l + 1. After the last level,
// finish(t) names the target vertex. Unused tracks are dropped.
struct Layered {
  std::vector<FeatureId> order;
  std::size_t tracks = 1;
  std::size_t start = 0;
  std::function<std::size_t(std::size_t level, std::size_t track, int bit)> step;
  std::function<std::uint32_t(std::size_t track)> finish;
};

Obdd build_layered(Obdd base, const Layered& layout) {
  const std::size_t m = layout.order.size();
  std::vector<std::uint32_t> below(layout.tracks);
  for (std::size_t t = 0; t < layout.tracks; ++t) below[t] = layout.finish(t);
  for (std::size_t l = m; l-- > 0;) {
    std::vector<std::uint32_t> here(layout.tracks);
    for (std::size_t t = 0; t < layout.tracks; ++t) {
      const std::size_t zero = layout.step(l, t, 0);
      const std::size_t one = layout.step(l, t, 1);
      here[t] = base.add_node(layout.order[l], below[zero], below[one]);
    }
    below = std::move(here);
  }
  base.source = below[layout.start];
  base.order = layout.order;
  return canonical_obdd(base);
}

void check_fresh(const std::vector<FeatureId>& features, std::size_t num_features) {
  std::vector<FeatureId> sorted = features;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::validation, "a feature is listed twice");
  }
  if (!sorted.empty() && sorted.back() >= num_features) {
    throw Error(ErrorKind::undefined_feature, "feature index out of range");
  }
}

std::vector<FeatureId> order_of(const Obdd& obdd) { return obdd.order.empty() ? infer_order(obdd) : obdd.order; }

}  // namespace

Obdd obdd_primitive(ObddPrimitive kind, const std::vector<FeatureId>& features, std::size_t num_features,
                    std::optional<FeatureId> special) {
  std::vector<FeatureId> all = features;
  if (kind == ObddPrimitive::iff_exists) {
    if (!special) throw Error(ErrorKind::validation, "iff_exists needs a special feature");
    all.push_back(*special);
  }
  check_fresh(all, num_features);

  Obdd base;
  base.num_features = num_features;
  Layered layout;
  layout.order = features;
  switch (kind) {
    case ObddPrimitive::exactly_one:
    case ObddPrimitive::exists:
      if (features.empty()) return Obdd::constant(num_features, 0);
      layout.tracks = 3;
      layout.step = [](std::size_t, std::size_t t, int bit) { return bit == 1 ? std::min<std::size_t>(t + 1, 2) : t; };
      if (kind == ObddPrimitive::exactly_one) {
        layout.finish = [](std::size_t t) { return t == 1 ? Obdd::kTrue : Obdd::kFalse; };
      } else {
        layout.finish = [](std::size_t t) { return t >= 1 ? Obdd::kTrue : Obdd::kFalse; };
      }
      break;
    case ObddPrimitive::iff_exists: {
      const std::uint32_t none = base.add_node(*special, Obdd::kTrue, Obdd::kFalse);
      const std::uint32_t some = base.add_node(*special, Obdd::kFalse, Obdd::kTrue);
      if (features.empty()) {
        base.source = none;
        base.order = all;
        return canonical_obdd(base);
      }
      layout.tracks = 3;
      layout.step = [](std::size_t, std::size_t t, int bit) { return bit == 1 ? std::min<std::size_t>(t + 1, 2) : t; };
      layout.finish = [none, some](std::size_t t) { return t == 0 ? none : some; };
      Obdd out = build_layered(std::move(base), layout);
      out.order = all;
      return out;
    }
    case ObddPrimitive::all_equal:
      if (features.empty()) return Obdd::constant(num_features, 1);
      // Tracks 0 and 1 remember the first value, track 2 a mismatch, track 3
      // is the source.
      layout.tracks = 4;
      layout.start = 3;
      layout.step = [](std::size_t, std::size_t t, int bit) -> std::size_t {
        if (t == 3) return static_cast<std::size_t>(bit);
        if (t == 2) return 2;
        return static_cast<std::size_t>(bit) == t ? t : 2;
      };
      layout.finish = [](std::size_t t) { return t == 2 ? Obdd::kFalse : Obdd::kTrue; };
      break;
  }
  return build_layered(std::move(base), layout);
}

Obdd obdd_conjoin(const std::vector<Obdd>& pieces) {
  if (pieces.empty()) throw Error(ErrorKind::validation, "nothing to conjoin");
  const std::size_t n = pieces.front().num_features;
  std::vector<FeatureId> order;
  std::vector<std::size_t> start;
  std::vector<bool> used(n, false);
  for (const Obdd& piece : pieces) {
    if (piece.num_features != n) throw Error(ErrorKind::validation, "pieces disagree on the feature count");
    start.push_back(order.size());
    for (FeatureId f : order_of(piece)) {
      if (used[f]) throw Error(ErrorKind::shared_feature, "pieces of a conjunction share a feature");
      used[f] = true;
      order.push_back(f);
    }
  }
  start.push_back(order.size());

  Obdd out;
  out.num_features = n;
  // bypass[i] reads order[i] and ignores it; past the end it is the 0-sink.
  std::vector<std::uint32_t> bypass(order.size() + 1, Obdd::kFalse);
  for (std::size_t i = order.size(); i-- > 0;) bypass[i] = out.add_node(order[i], bypass[i + 1], bypass[i + 1]);

  std::uint32_t entry = Obdd::kTrue;
  for (std::size_t p = pieces.size(); p-- > 0;) {
    const Obdd& piece = pieces[p];
    const std::uint32_t reject = bypass[start[p + 1]];
    std::vector<std::uint32_t> map(piece.nodes.size());
    map[Obdd::kFalse] = reject;
    map[Obdd::kTrue] = entry;
    for (std::uint32_t id = 2; id < piece.nodes.size(); ++id) map[id] = out.add_node(piece.nodes[id].feature, 0, 0);
    for (std::uint32_t id = 2; id < piece.nodes.size(); ++id) {
      ObddNode& node = out.nodes[map[id]];
      node.zero = map[piece.nodes[id].zero];
      node.one = map[piece.nodes[id].one];
    }
    entry = piece.source == Obdd::kFalse ? bypass[start[p]] : map[piece.source];
  }
  out.source = entry;
  out.order = order;
  return complete_obdd(canonical_obdd(out), order);
}

GadgetInstance gen_mcc_obdd_maj(const MccInstance& g) {
  const std::size_t k = g.k;
  std::vector<std::string> names;
  auto feature = [&](std::string name) {
    names.push_back(std::move(name));
    return static_cast<FeatureId>(names.size() - 1);
  };

  struct VertexFeatures {
    FeatureId chosen;
    FeatureId marker;
    std::vector<FeatureId> toward;  // one per part
  };
  struct EdgeFeatures {
    FeatureId marker;
    FeatureId forward;   // from the smaller vertex
    FeatureId backward;  // from the larger vertex
  };
  std::vector<VertexFeatures> vertex;
  for (std::uint32_t a = 0; a < g.size(); ++a) {
    const std::string& name = g.names[a];
    VertexFeatures v{feature("x[" + name + "]"), feature("y[" + name + "]"), {}};
    for (std::size_t j = 1; j <= k; ++j) v.toward.push_back(feature("z[" + name + "," + std::to_string(j) + "]"));
    vertex.push_back(std::move(v));
  }
  std::vector<EdgeFeatures> edge;
  for (const auto& [a, b] : g.edges) {
    const std::string ab = g.names[a] + "," + g.names[b];
    const std::string ba = g.names[b] + "," + g.names[a];
    edge.push_back(EdgeFeatures{feature("m[" + ab + "]"), feature("w[" + ab + "]"), feature("w[" + ba + "]")});
  }
  const std::size_t n = names.size();

  std::vector<Obdd> agree;
  for (const VertexFeatures& v : vertex) {
    std::vector<FeatureId> block{v.chosen, v.marker};
    block.insert(block.end(), v.toward.begin(), v.toward.end());
    agree.push_back(obdd_primitive(ObddPrimitive::all_equal, block, n));
  }
  for (const EdgeFeatures& e : edge) {
    agree.push_back(obdd_primitive(ObddPrimitive::all_equal, {e.marker, e.forward, e.backward}, n));
  }

  std::vector<Obdd> pick;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<FeatureId> markers;
    for (std::uint32_t a : g.members(i)) markers.push_back(vertex[a].marker);
    pick.push_back(obdd_primitive(ObddPrimitive::exactly_one, markers, n));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<FeatureId> markers;
      for (std::size_t x = 0; x < g.edges.size(); ++x) {
        const auto [a, b] = g.edges[x];
        if ((g.part[a] == i && g.part[b] == j) || (g.part[a] == j && g.part[b] == i)) {
          markers.push_back(edge[x].marker);
        }
      }
      pick.push_back(obdd_primitive(ObddPrimitive::exactly_one, markers, n));
    }
  }
  for (std::uint32_t a = 0; a < g.size(); ++a) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j == g.part[a]) continue;
      std::vector<FeatureId> out;
      for (std::size_t x = 0; x < g.edges.size(); ++x) {
        const auto [u, v] = g.edges[x];
        if (u == a && g.part[v] == j) out.push_back(edge[x].forward);
        if (v == a && g.part[u] == j) out.push_back(edge[x].backward);
      }
      pick.push_back(obdd_primitive(ObddPrimitive::iff_exists, out, n, vertex[a].toward[j]));
    }
  }

  Ensemble ensemble;
  ensemble.num_features = n;
  ensemble.elements.emplace_back(obdd_conjoin(agree));
  ensemble.elements.emplace_back(obdd_conjoin(pick));
  ensemble.elements.emplace_back(Obdd::constant(n, 0));
  Model model{FeatureSpace(names), std::move(ensemble)};
  validate(model);
  const std::size_t budget = 3 * (k * (k - (k > 0 ? 1 : 0)) / 2) + k * (k + 2);
  return {std::move(model), ExplanationQuery::local(XpKind::lCXp, Example(n), budget)};
}

Obdd obdd_agreement_counter(const Example& e, std::size_t k, const std::vector<FeatureId>& order, Label out_class) {
  const std::size_t n = e.size();
  check_fresh(order, n);
  Obdd base;
  base.num_features = n;
  if (order.empty()) return Obdd::constant(n, k == 0 ? out_class : 1 - out_class);
  Layered layout;
  layout.order = order;
  layout.tracks = k + 1;
  layout.step = [&](std::size_t level, std::size_t t, int bit) {
    return t < k && bit == e[order[level]] ? t + 1 : t;
  };
  layout.finish = [&](std::size_t t) { return Obdd::sink(t == k ? out_class : 1 - out_class); };
  return build_layered(std::move(base), layout);
}

GadgetInstance gen_laxp_to_gaxp(const Obdd& obdd, const FeatureSpace& space, const Example& e, std::size_t k) {
  const std::size_t n = space.size();
  if (obdd.num_features != n || e.size() != n) throw Error(ErrorKind::validation, "feature count mismatch");
  if (k > n) throw Error(ErrorKind::validation, "the budget exceeds the number of features");
  validate(obdd);
  std::vector<FeatureId> order = order_of(obdd);
  std::vector<bool> seen(n, false);
  for (FeatureId f : order) seen[f] = true;
  for (FeatureId f = 0; f < n; ++f) {
    if (!seen[f]) order.push_back(f);
  }
  const Label c = classify(obdd, e);

  Ensemble ensemble;
  ensemble.num_features = n;
  ensemble.elements.emplace_back(complete_obdd(obdd, order));
  ensemble.elements.emplace_back(obdd_agreement_counter(e, k, order, c));
  ensemble.elements.emplace_back(Obdd::constant(n, 1 - c, order));
  ensemble.shared_order = order;
  Obdd product = obdd_ensemble_product(ensemble);
  Model model{space, std::move(product)};
  validate(model);
  return {std::move(model), ExplanationQuery::global(XpKind::gAXp, c, k)};
}

}  // namespace xplain
