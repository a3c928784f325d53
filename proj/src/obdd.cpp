#include "xplain/obdd.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <string>

#include "xplain/error.hpp"

namespace xplain {

namespace {

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

std::optional<Witness> greedy_shrink(Witness w, const std::function<bool(const Witness&)>& valid) {
  if (!valid(w)) return std::nullopt;
  const FeatureSet members = w.local() ? w.features() : w.assignment().domain();
  for (FeatureId f : members) {
    Witness smaller = without(w, f);
    if (valid(smaller)) w = std::move(smaller);
  }
  return w;
}

// Assignment along a breadth-first shortest path from the source to `target`.
std::optional<PartialExample> shortest_path_to(const Obdd& obdd, std::uint32_t target) {
  std::vector<std::uint32_t> parent(obdd.nodes.size(), UINT32_MAX);
  std::vector<std::int8_t> arc(obdd.nodes.size(), -1);
  std::vector<std::uint8_t> seen(obdd.nodes.size(), 0);
  std::queue<std::uint32_t> frontier;
  frontier.push(obdd.source);
  seen[obdd.source] = 1;
  while (!frontier.empty()) {
    const std::uint32_t id = frontier.front();
    frontier.pop();
    if (id == target) {
      PartialExample path(obdd.num_features);
      for (std::uint32_t v = id; v != obdd.source; v = parent[v]) path.set(obdd.nodes[parent[v]].feature, arc[v]);
      return path;
    }
    if (obdd.is_sink(id)) continue;
    for (int b = 0; b < 2; ++b) {
      const std::uint32_t next = b == 0 ? obdd.nodes[id].zero : obdd.nodes[id].one;
      if (seen[next] != 0) continue;
      seen[next] = 1;
      parent[next] = id;
      arc[next] = static_cast<std::int8_t>(b);
      frontier.push(next);
    }
  }
  return std::nullopt;
}

// forced[f]: -1 free, 0 keep e(f), 1 flip f. Returns the least number of
// flips on a path from the source to `target` honouring `forced`.
std::size_t min_flips(const Obdd& obdd, const Example& e, std::uint32_t target, const std::vector<int>& forced) {
  const std::size_t count = obdd.nodes.size();
  std::vector<std::vector<std::pair<std::uint32_t, std::uint8_t>>> incoming(count);
  for (std::uint32_t id = 2; id < count; ++id) {
    const ObddNode& node = obdd.nodes[id];
    for (int b = 0; b < 2; ++b) {
      const std::uint8_t cost = b != e[node.feature] ? 1 : 0;
      const int rule = forced[node.feature];
      if (rule >= 0 && rule != cost) continue;
      incoming[b == 0 ? node.zero : node.one].emplace_back(id, cost);
    }
  }
  std::vector<std::size_t> dist(count, kUnreachable);
  std::deque<std::uint32_t> work;
  dist[target] = 0;
  work.push_back(target);
  while (!work.empty()) {
    const std::uint32_t id = work.front();
    work.pop_front();
    for (const auto& [from, cost] : incoming[id]) {
      if (dist[id] + cost >= dist[from]) continue;
      dist[from] = dist[id] + cost;
      if (cost == 0) {
        work.push_front(from);
      } else {
        work.push_back(from);
      }
    }
  }
  return dist[obdd.source];
}

std::size_t saturating_product(const std::vector<std::size_t>& factors) {
  std::size_t value = 1;
  for (std::size_t f : factors) {
    if (f != 0 && value > std::numeric_limits<std::size_t>::max() / f) return std::numeric_limits<std::size_t>::max();
    value *= f;
  }
  return value;
}

}  // namespace

bool obdd_check(const Obdd& obdd, const ExplanationQuery& q, const Witness& w) {
  const Label example_class = q.local() ? classify(obdd, q.example()) : 0;
  return holds_via(q, w, example_class, [&](const PartialExample& tau, Label c) {
    return !reachable_sinks(obdd, tau).contains(1 - c);
  });
}

std::optional<Witness> obdd_subset_min(const Obdd& obdd, const ExplanationQuery& q) {
  auto valid = [&](const Witness& w) { return obdd_check(obdd, q, w); };
  switch (q.kind()) {
    case XpKind::lAXp:
      return greedy_shrink(Witness(all_features(obdd.num_features)), valid);
    case XpKind::lCXp:
      try {
        return obdd_min_lcxp(obdd, q.example());
      } catch (const Error& ex) {
        if (ex.kind() == ErrorKind::homogeneous) return std::nullopt;
        throw;
      }
    case XpKind::gAXp:
    case XpKind::gCXp: {
      const Label seed = q.kind() == XpKind::gAXp ? q.target_class() : 1 - q.target_class();
      auto path = shortest_path_to(obdd, Obdd::sink(seed));
      if (!path) return std::nullopt;
      return greedy_shrink(Witness(std::move(*path)), valid);
    }
  }
  return std::nullopt;
}

Witness obdd_min_lcxp(const Obdd& input, const Example& e) {
  const Obdd obdd = complete_obdd(input);
  const std::uint32_t target = Obdd::sink(1 - classify(obdd, e));
  std::vector<int> forced(obdd.num_features, -1);
  const std::size_t best = min_flips(obdd, e, target, forced);
  if (best == kUnreachable) throw Error(ErrorKind::homogeneous, "the other sink is unreachable");
  // Every path of a complete OBDD reads each feature of its order once, so
  // fixing features one at a time in index order yields the least set.
  FeatureSet flips;
  FeatureSet read(obdd.order.begin(), obdd.order.end());
  std::sort(read.begin(), read.end());
  for (FeatureId f : read) {
    forced[f] = 1;
    if (min_flips(obdd, e, target, forced) == best) {
      flips.push_back(f);
    } else {
      forced[f] = 0;
    }
  }
  return Witness(std::move(flips));
}

std::optional<Witness> obdd_xp_search(const Obdd& obdd, const ExplanationQuery& q) {
  const std::size_t n = obdd.num_features;
  return enumerate_minimum(q.local(), n, q.budget().value_or(n),
                           [&](const Witness& w) { return obdd_check(obdd, q, w); });
}

Obdd obdd_ensemble_product(const Ensemble& ensemble, std::size_t node_cap) {
  if (ensemble.elements.empty()) throw Error(ErrorKind::validation, "ensemble has no elements");
  if (ensemble.elements.size() % 2 == 0) throw Error(ErrorKind::even_ensemble, "ensemble has an even size");
  std::vector<Obdd> members;
  std::vector<FeatureId> order;
  for (const ElementBody& element : ensemble.elements) {
    const auto* obdd = std::get_if<Obdd>(&element);
    if (obdd == nullptr) throw Error(ErrorKind::validation, "OBDD product needs an ensemble of OBDDs");
    if (members.empty()) {
      if (ensemble.shared_order) {
        order = *ensemble.shared_order;
      } else {
        order = obdd->order.empty() ? infer_order(*obdd) : obdd->order;
      }
    }
    members.push_back(complete_obdd(*obdd, order));
  }
  std::vector<std::size_t> position(ensemble.num_features, SIZE_MAX);
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  Obdd out;
  out.num_features = ensemble.num_features;
  out.order = order;
  const std::size_t needed = ensemble.threshold();
  using Tuple = std::vector<std::uint32_t>;
  std::map<Tuple, std::uint32_t> ids;
  std::vector<Tuple> pending;

  auto intern = [&](const Tuple& tuple) -> std::uint32_t {
    bool all_sinks = true;
    std::size_t ones = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (!members[i].is_sink(tuple[i])) {
        all_sinks = false;
      } else if (tuple[i] == Obdd::kTrue) {
        ++ones;
      }
    }
    if (all_sinks) return Obdd::sink(ones >= needed ? 1 : 0);
    if (auto it = ids.find(tuple); it != ids.end()) return it->second;
    if (ids.size() >= node_cap) {
      throw Error(ErrorKind::budget_exceeded, "product exceeds the node cap " + std::to_string(node_cap));
    }
    const std::uint32_t id = out.add_node(0, 0, 0);
    ids.emplace(tuple, id);
    pending.push_back(tuple);
    return id;
  };

  Tuple start;
  for (const Obdd& member : members) start.push_back(member.source);
  out.source = intern(start);
  for (std::size_t next = 0; next < pending.size(); ++next) {
    const Tuple tuple = pending[next];
    const std::uint32_t id = ids.at(tuple);
    std::size_t level = SIZE_MAX;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (!members[i].is_sink(tuple[i])) level = std::min(level, position[members[i].nodes[tuple[i]].feature]);
    }
    Tuple zero = tuple;
    Tuple one = tuple;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (members[i].is_sink(tuple[i])) continue;
      const ObddNode& node = members[i].nodes[tuple[i]];
      if (position[node.feature] != level) continue;
      zero[i] = node.zero;
      one[i] = node.one;
    }
    const std::uint32_t zero_id = intern(zero);
    const std::uint32_t one_id = intern(one);
    out.nodes[id] = ObddNode{order[level], zero_id, one_id};
  }
  return out;
}

Obdd dt_to_obdd(const DecisionTree& tree) {
  Obdd obdd;
  obdd.num_features = tree.num_features;
  auto convert = [&](auto&& self, std::uint32_t id) -> std::uint32_t {
    const DtNode& node = tree.nodes[id];
    if (node.is_leaf()) return Obdd::sink(node.label);
    const std::uint32_t zero = self(self, node.zero);
    const std::uint32_t one = self(self, node.one);
    return obdd.add_node(node.feature, zero, one);
  };
  obdd.source = convert(convert, tree.root);
  obdd.order = infer_order(obdd);
  return complete_obdd(obdd);
}

std::size_t obdd_product_bound(const Ensemble& ensemble) {
  std::vector<std::size_t> sizes;
  for (const ElementBody& element : ensemble.elements) sizes.push_back(obdd_size(std::get<Obdd>(element)));
  return saturating_product(sizes);
}

}  // namespace xplain
