#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <string>

#include "xplain/error.hpp"
#include "xplain/models.hpp"

namespace xplain {

namespace {

std::vector<std::uint8_t> reachable_mask(const Obdd& obdd) {
  std::vector<std::uint8_t> seen(obdd.nodes.size(), 0);
  std::vector<std::uint32_t> stack{obdd.source};
  seen[obdd.source] = 1;
  while (!stack.empty()) {
    const std::uint32_t id = stack.back();
    stack.pop_back();
    if (obdd.is_sink(id)) continue;
    for (std::uint32_t next : {obdd.nodes[id].zero, obdd.nodes[id].one}) {
      if (seen[next] == 0) {
        seen[next] = 1;
        stack.push_back(next);
      }
    }
  }
  return seen;
}

std::vector<std::size_t> positions(const std::vector<FeatureId>& order, std::size_t num_features) {
  std::vector<std::size_t> pos(num_features, SIZE_MAX);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  return pos;
}

[[noreturn]] void not_ordered(const std::string& message) { throw Error(ErrorKind::not_ordered, message); }

const std::vector<FeatureId>& effective_order(const Obdd& obdd, std::vector<FeatureId>& scratch) {
  if (!obdd.order.empty()) return obdd.order;
  scratch = infer_order(obdd);
  return scratch;
}

}  // namespace

std::vector<FeatureId> infer_order(const Obdd& obdd) {
  const auto seen = reachable_mask(obdd);
  std::vector<std::vector<FeatureId>> successors(obdd.num_features);
  std::vector<std::size_t> indegree(obdd.num_features, 0);
  std::vector<std::uint8_t> used(obdd.num_features, 0);
  for (std::uint32_t id = 2; id < obdd.nodes.size(); ++id) {
    if (seen[id] == 0) continue;
    const ObddNode& node = obdd.nodes[id];
    used[node.feature] = 1;
    for (std::uint32_t next : {node.zero, node.one}) {
      if (obdd.is_sink(next)) continue;
      const FeatureId g = obdd.nodes[next].feature;
      if (g == node.feature) not_ordered("feature repeats along an OBDD path");
      successors[node.feature].push_back(g);
    }
  }
  for (auto& list : successors) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (FeatureId g : list) ++indegree[g];
  }
  std::priority_queue<FeatureId, std::vector<FeatureId>, std::greater<>> ready;
  std::size_t total = 0;
  for (FeatureId f = 0; f < obdd.num_features; ++f) {
    if (used[f] == 0) continue;
    ++total;
    if (indegree[f] == 0) ready.push(f);
  }
  std::vector<FeatureId> order;
  while (!ready.empty()) {
    const FeatureId f = ready.top();
    ready.pop();
    order.push_back(f);
    for (FeatureId g : successors[f]) {
      if (--indegree[g] == 0) ready.push(g);
    }
  }
  if (order.size() != total) not_ordered("OBDD paths disagree on the feature order");
  return order;
}

void check_ordered(const Obdd& obdd) {
  if (obdd.order.empty()) {
    infer_order(obdd);
    return;
  }
  const auto pos = positions(obdd.order, obdd.num_features);
  const auto seen = reachable_mask(obdd);
  for (std::uint32_t id = 2; id < obdd.nodes.size(); ++id) {
    if (seen[id] == 0) continue;
    const ObddNode& node = obdd.nodes[id];
    if (pos[node.feature] == SIZE_MAX) not_ordered("OBDD tests a feature missing from its order");
    for (std::uint32_t next : {node.zero, node.one}) {
      if (obdd.is_sink(next)) continue;
      const FeatureId g = obdd.nodes[next].feature;
      if (pos[g] == SIZE_MAX || pos[g] <= pos[node.feature]) not_ordered("OBDD path violates the order");
    }
  }
}

Obdd canonical_obdd(const Obdd& obdd) {
  Obdd out;
  out.num_features = obdd.num_features;
  out.order = obdd.order;
  if (obdd.is_sink(obdd.source)) {
    out.source = obdd.source;
    return out;
  }
  std::vector<std::uint32_t> renamed(obdd.nodes.size(), UINT32_MAX);
  renamed[0] = 0;
  renamed[1] = 1;
  std::vector<std::uint32_t> sequence;
  std::queue<std::uint32_t> frontier;
  frontier.push(obdd.source);
  renamed[obdd.source] = 2;
  while (!frontier.empty()) {
    const std::uint32_t id = frontier.front();
    frontier.pop();
    sequence.push_back(id);
    for (std::uint32_t next : {obdd.nodes[id].zero, obdd.nodes[id].one}) {
      if (renamed[next] == UINT32_MAX) {
        renamed[next] = static_cast<std::uint32_t>(2 + sequence.size() + frontier.size());
        frontier.push(next);
      }
    }
  }
  out.nodes.resize(2 + sequence.size());
  for (std::uint32_t id : sequence) {
    const ObddNode& node = obdd.nodes[id];
    out.nodes[renamed[id]] = ObddNode{node.feature, renamed[node.zero], renamed[node.one]};
  }
  out.source = 2;
  return out;
}

Obdd complete_obdd(const Obdd& obdd) {
  std::vector<FeatureId> scratch;
  return complete_obdd(obdd, effective_order(obdd, scratch));
}

Obdd complete_obdd(const Obdd& obdd, const std::vector<FeatureId>& order) {
  Obdd input = obdd;
  input.order = order;
  check_ordered(input);
  if (input.is_sink(input.source)) return canonical_obdd(input);

  const auto pos = positions(order, input.num_features);
  const std::size_t depth = order.size();
  auto level = [&](std::uint32_t id) { return input.is_sink(id) ? depth : pos[input.nodes[id].feature]; };

  Obdd out;
  out.num_features = input.num_features;
  out.order = order;
  std::vector<std::uint32_t> mapped(input.nodes.size(), UINT32_MAX);
  mapped[0] = 0;
  mapped[1] = 1;
  std::map<std::pair<std::uint32_t, std::size_t>, std::uint32_t> pads;

  std::function<std::uint32_t(std::uint32_t)> map_node;
  // Vertex that starts reading at `from` and then continues as `id`.
  std::function<std::uint32_t(std::uint32_t, std::size_t)> entry = [&](std::uint32_t id, std::size_t from) {
    if (level(id) == from) return map_node(id);
    const auto key = std::make_pair(id, from);
    if (auto it = pads.find(key); it != pads.end()) return it->second;
    const std::uint32_t next = entry(id, from + 1);
    const std::uint32_t pad = out.add_node(order[from], next, next);
    pads.emplace(key, pad);
    return pad;
  };
  map_node = [&](std::uint32_t id) {
    if (mapped[id] != UINT32_MAX) return mapped[id];
    const ObddNode node = input.nodes[id];
    const std::size_t here = pos[node.feature];
    const std::uint32_t zero = entry(node.zero, here + 1);
    const std::uint32_t one = entry(node.one, here + 1);
    mapped[id] = out.add_node(node.feature, zero, one);
    return mapped[id];
  };
  out.source = entry(input.source, 0);
  return canonical_obdd(out);
}

bool is_complete(const Obdd& obdd) {
  if (obdd.is_sink(obdd.source)) return true;
  std::vector<FeatureId> scratch;
  const auto& order = effective_order(obdd, scratch);
  const auto pos = positions(order, obdd.num_features);
  auto level = [&](std::uint32_t id) { return obdd.is_sink(id) ? order.size() : pos[obdd.nodes[id].feature]; };
  if (level(obdd.source) != 0) return false;
  const auto seen = reachable_mask(obdd);
  for (std::uint32_t id = 2; id < obdd.nodes.size(); ++id) {
    if (seen[id] == 0) continue;
    for (std::uint32_t next : {obdd.nodes[id].zero, obdd.nodes[id].one}) {
      if (level(next) != level(id) + 1) return false;
    }
  }
  return true;
}

std::size_t obdd_width(const Obdd& obdd) {
  const auto seen = reachable_mask(obdd);
  std::vector<std::size_t> per_feature(obdd.num_features, 0);
  std::size_t width = 0;
  for (std::uint32_t id = 2; id < obdd.nodes.size(); ++id) {
    if (seen[id] == 0) continue;
    width = std::max(width, ++per_feature[obdd.nodes[id].feature]);
  }
  return width;
}

std::size_t obdd_size(const Obdd& obdd) {
  const auto seen = reachable_mask(obdd);
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
}

}  // namespace xplain
