#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "xplain/explain.hpp"
#include "xplain/gadgets.hpp"
#include "xplain/models.hpp"

namespace xplain::testing {

using Rng = std::mt19937_64;

// Root f1; its 1-child tests f2; the only 1-leaf is at f1 = f2 = 1.
DecisionTree and_tree();
Model and_tree_model();
// f1 < f2, positive iff f1 != f2.
Obdd xor_obdd();
Obdd and_obdd();
// Single-feature tree / OBDD / list over n features.
DecisionTree stump(std::size_t n, FeatureId f);
Obdd single_node_obdd(std::size_t n, FeatureId f);
DecisionList single_rule_dl(std::size_t n, FeatureId f);

// The four-rule list over x, y, z from the running example and e = (0, 0, 1).
DecisionList running_list();
Model running_model();
Example running_example();

Model single(DecisionTree t);
Model single(Obdd o);
Model single(DecisionList l);
Model single(DecisionSet s);
Model ensemble_model(std::size_t n, std::vector<ElementBody> elements,
                     std::optional<std::vector<FeatureId>> shared_order = std::nullopt);

// Random generators. Trees never repeat a feature along a path.
DecisionTree random_dt(Rng& rng, std::size_t n, std::size_t max_leaves);
// Complete over a random permutation of all n features; every level holds at
// most `max_width` vertices.
Obdd random_complete_obdd(Rng& rng, std::size_t n, std::size_t max_width,
                          std::optional<std::vector<FeatureId>> order = std::nullopt);
// OBDD that may skip levels (not complete), over a given order.
Obdd random_skipping_obdd(Rng& rng, std::size_t n, std::size_t max_width);
DecisionList random_dl(Rng& rng, std::size_t n, std::size_t max_rules, std::size_t max_term);
DecisionSet random_ds(Rng& rng, std::size_t n, std::size_t max_terms, std::size_t max_term);
Example random_example(Rng& rng, std::size_t n);
PartialExample random_partial(Rng& rng, std::size_t n);
// Random model of the given kind; ensembles get three elements.
Model random_model(Rng& rng, ModelKind kind, std::size_t n, bool ensemble);

// Random properly coloured graph with k non-empty parts on at most max_n vertices.
MccInstance random_mcc(Rng& rng, std::size_t k, std::size_t max_n);
MccInstance triangle();                 // parts {a},{b},{c}, all edges
MccInstance path3();                    // a-b-c, parts {a},{b},{c}
MccInstance single_edge();              // parts {a},{b}, edge a-b

// Brute-force minimum hitting set size over elements 1..universe.
std::size_t min_hitting_set(std::size_t universe, const std::vector<std::vector<std::size_t>>& sets);

// All 2^n examples in index order.
std::vector<Example> all_examples(std::size_t n);

}  // namespace xplain::testing
