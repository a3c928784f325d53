#include "xplain/dslist.hpp"

#include <algorithm>
#include <limits>

#include "xplain/error.hpp"

namespace xplain {

namespace {

// A rule one element of the search must keep firing, and the rules before it
// that must stay silent.
struct Constraint {
  const DecisionList* list;
  std::size_t rule;
};

class SearchTree {
 public:
  SearchTree(const Example& e, std::size_t k, const std::vector<Constraint>& chosen, const FeatureSet& locked)
      : e_(e), k_(k), chosen_(chosen), locked_(locked) {}

  std::optional<FeatureSet> run(FeatureSet start) { return visit(std::move(start)); }
  std::size_t leaves() const { return leaves_; }

 private:
  // Earliest rule before a chosen one that fires on e flipped by `flips`.
  const Term* blocking(const Example& flipped) const {
    for (const Constraint& c : chosen_) {
      for (std::size_t l = 0; l < c.rule; ++l) {
        if (satisfies(flipped, c.list->rules[l].term)) return &c.list->rules[l].term;
      }
    }
    return nullptr;
  }

  std::optional<FeatureSet> visit(FeatureSet flips) {
    if (flips.size() > k_) {
      ++leaves_;
      return std::nullopt;
    }
    const Example flipped = flip(e_, flips);
    const Term* block = blocking(flipped);
    if (block == nullptr) {
      ++leaves_;
      return flips;
    }
    if (flips.size() == k_) {
      ++leaves_;
      return std::nullopt;
    }
    FeatureSet branch;
    for (const Literal& lit : *block) {
      if (!std::binary_search(flips.begin(), flips.end(), lit.feature) &&
          !std::binary_search(locked_.begin(), locked_.end(), lit.feature)) {
        branch.push_back(lit.feature);
      }
    }
    if (branch.empty()) {
      ++leaves_;
      return std::nullopt;
    }
    std::optional<FeatureSet> best;
    for (FeatureId f : branch) {
      FeatureSet next = flips;
      next.insert(std::upper_bound(next.begin(), next.end(), f), f);
      auto found = visit(std::move(next));
      if (found && (!best || found->size() < best->size())) best = std::move(found);
    }
    return best;
  }

  const Example& e_;
  std::size_t k_;
  const std::vector<Constraint>& chosen_;
  const FeatureSet& locked_;
  std::size_t leaves_ = 0;
};

std::size_t longest_term(const DecisionList& list) {
  std::size_t a = 0;
  for (const Rule& rule : list.rules) a = std::max(a, rule.term.size());
  return a;
}

// Runs the search for one candidate and folds the result into `best`.
void try_candidate(const Example& e, std::size_t k, const std::vector<Constraint>& chosen,
                   std::optional<Witness>& best, BranchStats* stats) {
  Term combined;
  for (const Constraint& c : chosen) {
    const Term& term = c.list->rules[c.rule].term;
    combined.insert(combined.end(), term.begin(), term.end());
  }
  combined = normalize_term(std::move(combined));
  if (is_contradictory(combined)) return;
  FeatureSet seed;
  FeatureSet locked;
  for (const Literal& lit : combined) {
    locked.push_back(lit.feature);
    if (lit.value != e[lit.feature]) seed.push_back(lit.feature);
  }
  seed = normalize_feature_set(std::move(seed));
  locked = normalize_feature_set(std::move(locked));
  SearchTree tree(e, k, chosen, locked);
  auto found = tree.run(std::move(seed));
  if (stats != nullptr) {
    ++stats->candidates;
    stats->total_leaves += tree.leaves();
    stats->max_leaves = std::max(stats->max_leaves, tree.leaves());
  }
  if (found && (!best || found->size() < best->size())) best = Witness(std::move(*found));
}

}  // namespace

DecisionList ds_to_dl(const DecisionSet& set) {
  DecisionList list;
  list.num_features = set.num_features;
  for (const Term& term : set.terms) list.rules.push_back(Rule{term, 1 - set.default_class});
  list.rules.push_back(Rule{{}, set.default_class});
  return list;
}

std::size_t branch_leaf_bound(std::size_t term_size, std::size_t k) {
  const std::size_t a = std::max<std::size_t>(1, term_size);
  std::size_t value = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (value > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
    value *= a;
  }
  return value;
}

std::optional<Witness> dl_min_lcxp_branch(const DecisionList& list, const Example& e, std::size_t k,
                                          BranchStats* stats) {
  const Label own = classify(list, e);
  if (stats != nullptr) stats->term_size = std::max(stats->term_size, longest_term(list));
  std::optional<Witness> best;
  for (std::size_t j = 0; j < list.rules.size(); ++j) {
    if (list.rules[j].label == own) continue;
    try_candidate(e, k, {Constraint{&list, j}}, best, stats);
  }
  return best;
}

std::optional<Witness> dle_min_lcxp_branch(const Ensemble& ensemble, const Example& e, std::size_t k,
                                           BranchStats* stats) {
  if (ensemble.elements.empty()) throw Error(ErrorKind::validation, "ensemble has no elements");
  if (ensemble.elements.size() % 2 == 0) throw Error(ErrorKind::even_ensemble, "ensemble has an even size");
  std::vector<DecisionList> lists;
  for (const ElementBody& element : ensemble.elements) {
    if (const auto* list = std::get_if<DecisionList>(&element)) {
      lists.push_back(*list);
    } else if (const auto* set = std::get_if<DecisionSet>(&element)) {
      lists.push_back(ds_to_dl(*set));
    } else {
      throw Error(ErrorKind::validation, "rule branching needs an ensemble of decision lists or sets");
    }
  }
  const Label own = classify(ensemble, e);
  if (stats != nullptr) {
    for (const DecisionList& list : lists) stats->term_size = std::max(stats->term_size, longest_term(list));
  }

  std::optional<Witness> best;
  std::vector<std::size_t> pick(lists.size(), 0);
  std::vector<Constraint> chosen(lists.size());
  while (true) {
    std::size_t differ = 0;
    for (std::size_t o = 0; o < lists.size(); ++o) {
      chosen[o] = Constraint{&lists[o], pick[o]};
      if (lists[o].rules[pick[o]].label != own) ++differ;
    }
    if (differ > lists.size() - differ) try_candidate(e, k, chosen, best, stats);
    std::size_t o = lists.size();
    while (o > 0 && pick[o - 1] + 1 == lists[o - 1].rules.size()) pick[--o] = 0;
    if (o == 0) break;
    ++pick[o - 1];
  }
  return best;
}

}  // namespace xplain
