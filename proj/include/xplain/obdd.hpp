#pragma once

#include <cstddef>
#include <optional>

#include "xplain/dt.hpp"
#include "xplain/explain.hpp"
#include "xplain/models.hpp"

namespace xplain {

// Validity of w for q by sink reachability after deleting the arcs that
// disagree with the fixed features.
bool obdd_check(const Obdd& obdd, const ExplanationQuery& q, const Witness& w);

// Subset-minimal witness with ascending-index deletion. Global kinds start
// from a shortest source-to-sink path (0-arcs explored first).
std::optional<Witness> obdd_subset_min(const Obdd& obdd, const ExplanationQuery& q);

// Minimum flip set: cheapest path to the other sink where following the arc
// that disagrees with e costs 1. Among minimum sets the lexicographically
// smallest is returned. Throws Homogeneous when the other sink is unreachable.
Witness obdd_min_lcxp(const Obdd& obdd, const Example& e);

// Exhaustive search up to the query budget (|F| if absent) using obdd_check.
std::optional<Witness> obdd_xp_search(const Obdd& obdd, const ExplanationQuery& q);

// One OBDD equivalent to the majority of an ensemble of OBDDs that share an
// order. Vertices are the reachable tuples of member vertices. Throws
// BudgetExceeded once more than `node_cap` tuples are discovered.
Obdd obdd_ensemble_product(const Ensemble& ensemble, std::size_t node_cap = kDefaultNodeCap);

// Product of the member sizes with saturation.
std::size_t obdd_product_bound(const Ensemble& ensemble);

// Tree as a complete OBDD over an order inferred from the tree. Throws
// NotOrdered when no order fits every path.
Obdd dt_to_obdd(const DecisionTree& tree);

}  // namespace xplain
