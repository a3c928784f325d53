#pragma once

#include <cstddef>
#include <optional>

#include "xplain/explain.hpp"
#include "xplain/models.hpp"

namespace xplain {

// One (t, 1-b) rule per term in input order, closed by (∅, b).
DecisionList ds_to_dl(const DecisionSet& set);

// Search-tree instrumentation. A candidate is one rule (or one rule tuple for
// ensembles) whose class differs from the example's.
struct BranchStats {
  std::size_t candidates = 0;
  std::size_t total_leaves = 0;
  std::size_t max_leaves = 0;  // largest leaf count of a single candidate
  std::size_t term_size = 0;   // longest term in the input
};

// max(1, a)^k with saturation.
std::size_t branch_leaf_bound(std::size_t term_size, std::size_t k);

// Minimum flip set of size at most k that makes the list assign the other
// class to e, or nullopt. Candidate rules are tried in list order and a later
// rule only wins with a strictly smaller set.
std::optional<Witness> dl_min_lcxp_branch(const DecisionList& list, const Example& e, std::size_t k,
                                          BranchStats* stats = nullptr);

// Same for an odd ensemble of lists (decision sets are converted first). Rule
// tuples with one rule per element are enumerated in lexicographic order and
// kept when their labels outvote the example's class.
std::optional<Witness> dle_min_lcxp_branch(const Ensemble& ensemble, const Example& e, std::size_t k,
                                           BranchStats* stats = nullptr);

}  // namespace xplain
