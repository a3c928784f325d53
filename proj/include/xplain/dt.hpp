#pragma once

#include <cstddef>
#include <optional>

#include "xplain/explain.hpp"
#include "xplain/models.hpp"

namespace xplain {

inline constexpr std::size_t kDefaultNodeCap = 1'000'000;

// Validity of w for q via restriction of a simplified tree. Works for all four kinds.
bool dt_check(const DecisionTree& tree, const ExplanationQuery& q, const Witness& w);

// Subset-minimal witness; nullopt when none exists. Deletion tries features in
// ascending index order. lCXp delegates to dt_min_lcxp.
std::optional<Witness> dt_subset_min(const DecisionTree& tree, const ExplanationQuery& q);

// Minimum lCXp: the smallest disagreement set between e and the path of a leaf
// of the other class; ties go to the lexicographically smallest set.
// Throws Homogeneous when no such leaf exists.
Witness dt_min_lcxp(const DecisionTree& tree, const Example& e);

// Minimum witness of size at most the query budget (|F| if absent), by
// exhaustive enumeration with dt_check.
std::optional<Witness> dt_xp_search(const DecisionTree& tree, const ExplanationQuery& q);

// Majority ensemble of trees as one tree: a copy of the next tree hangs below
// every leaf, restricted to the path so far. Throws BudgetExceeded when the
// product of the leaf counts exceeds `node_cap`.
DecisionTree dt_ensemble_to_dt(const Ensemble& ensemble, std::size_t node_cap = kDefaultNodeCap);

// m^l with saturation, m = largest leaf count.
std::size_t dt_product_bound(const Ensemble& ensemble);

}  // namespace xplain
