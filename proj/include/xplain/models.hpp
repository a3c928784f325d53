#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "xplain/features.hpp"

namespace xplain {

// ---------------------------------------------------------------------------
// Decision trees

struct DtNode {
  static constexpr FeatureId kLeaf = std::numeric_limits<FeatureId>::max();

  FeatureId feature = kLeaf;
  std::uint32_t zero = 0;
  std::uint32_t one = 0;
  Label label = 0;  // meaningful for leaves only

  bool is_leaf() const { return feature == kLeaf; }
};

struct DecisionTree {
  std::size_t num_features = 0;
  std::vector<DtNode> nodes;
  std::uint32_t root = 0;

  static DecisionTree constant(std::size_t num_features, Label label);

  std::uint32_t add_leaf(Label label);
  std::uint32_t add_node(FeatureId feature, std::uint32_t zero, std::uint32_t one);
  const DtNode& node(std::uint32_t id) const { return nodes.at(id); }
};

struct LeafPath {
  std::uint32_t leaf;
  Label label;
  PartialExample path;  // α: the assignment along the root-to-leaf path
};

// Depth-first, 0-child before 1-child.
std::vector<LeafPath> leaf_paths(const DecisionTree& tree);
std::size_t leaf_count(const DecisionTree& tree);
std::size_t leaf_count(const DecisionTree& tree, Label label);
std::size_t mnl(const DecisionTree& tree);
std::size_t height(const DecisionTree& tree);

// ---------------------------------------------------------------------------
// Rule models

struct Literal {
  FeatureId feature;
  int value;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Conjunction of literals, sorted by feature.
using Term = std::vector<Literal>;

Term normalize_term(Term term);
bool is_contradictory(const Term& term);
bool satisfies(const Example& e, const Term& term);
FeatureSet term_features(const Term& term);

struct DecisionSet {
  std::size_t num_features = 0;
  std::vector<Term> terms;
  Label default_class = 0;
};

struct Rule {
  Term term;
  Label label = 0;
};

struct DecisionList {
  std::size_t num_features = 0;
  std::vector<Rule> rules;  // the last term is empty
};

// Index of the first rule whose term e satisfies.
std::size_t classifying_rule(const DecisionList& list, const Example& e);

// ---------------------------------------------------------------------------
// OBDDs. Vertex 0 is the 0-sink, vertex 1 the 1-sink.

struct ObddNode {
  static constexpr FeatureId kSink = std::numeric_limits<FeatureId>::max();

  FeatureId feature = kSink;
  std::uint32_t zero = 0;
  std::uint32_t one = 0;

  bool is_sink() const { return feature == kSink; }
};

struct Obdd {
  static constexpr std::uint32_t kFalse = 0;
  static constexpr std::uint32_t kTrue = 1;

  std::size_t num_features = 0;
  std::vector<ObddNode> nodes{ObddNode{}, ObddNode{}};
  std::uint32_t source = kFalse;
  std::vector<FeatureId> order;

  static Obdd constant(std::size_t num_features, Label label, std::vector<FeatureId> order = {});
  static std::uint32_t sink(Label label) { return label == 0 ? kFalse : kTrue; }

  std::uint32_t add_node(FeatureId feature, std::uint32_t zero, std::uint32_t one);
  bool is_sink(std::uint32_t id) const { return id <= kTrue; }
  const ObddNode& node(std::uint32_t id) const { return nodes.at(id); }
  std::size_t inner_count() const { return nodes.size() - 2; }
};

// ---------------------------------------------------------------------------
// Ensembles and the tagged model

using ElementBody = std::variant<DecisionTree, DecisionSet, DecisionList, Obdd>;

struct Ensemble {
  std::size_t num_features = 0;
  std::vector<ElementBody> elements;
  std::optional<std::vector<FeatureId>> shared_order;

  std::size_t threshold() const { return elements.size() / 2 + 1; }
};

enum class ModelKind { dt, ds, dl, obdd, ensemble };

using ModelBody = std::variant<DecisionTree, DecisionSet, DecisionList, Obdd, Ensemble>;

struct Model {
  FeatureSpace features;
  ModelBody body;

  ModelKind kind() const { return static_cast<ModelKind>(body.index()); }
  // Kind of the ensemble members, or of the model itself.
  ModelKind element_kind() const;
  std::size_t num_features() const { return features.size(); }
};

const char* model_kind_name(ModelKind kind);

// ---------------------------------------------------------------------------
// Semantics

Label classify(const DecisionTree& tree, const Example& e);
Label classify(const DecisionSet& set, const Example& e);
Label classify(const DecisionList& list, const Example& e);
Label classify(const Obdd& obdd, const Example& e);
Label classify(const ElementBody& element, const Example& e);
Label classify(const Ensemble& ensemble, const Example& e);
Label classify(const Model& model, const Example& e);

// Throws Error(validation / even_ensemble / not_ordered / undefined_feature).
void validate(const DecisionTree& tree);
void validate(const DecisionSet& set);
void validate(const DecisionList& list);
void validate(const Obdd& obdd);
void validate(const Ensemble& ensemble);
void validate(const Model& model);

// ---------------------------------------------------------------------------
// Normalization and restriction

DecisionTree simplify_dt(const DecisionTree& tree);
DecisionTree restrict_dt(const DecisionTree& tree, const PartialExample& tau);

struct LabelSet {
  bool zero = false;
  bool one = false;

  bool contains(Label c) const { return c == 0 ? zero : one; }
  void add(Label c) { (c == 0 ? zero : one) = true; }
  std::size_t size() const { return static_cast<std::size_t>(zero) + static_cast<std::size_t>(one); }
  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

// Labels of the leaves reachable when every node testing f in dom(τ) keeps only its τ(f)-child.
LabelSet reachable_leaves(const DecisionTree& tree, const PartialExample& tau);
LabelSet reachable_sinks(const Obdd& obdd, const PartialExample& tau);

// Topological order consistent with every path, ties by feature index.
std::vector<FeatureId> infer_order(const Obdd& obdd);
void check_ordered(const Obdd& obdd);
// Drops unreachable vertices and renumbers breadth-first from the source.
Obdd canonical_obdd(const Obdd& obdd);
// Pads skipped levels so that every maximal path reads every feature of the order.
Obdd complete_obdd(const Obdd& obdd);
Obdd complete_obdd(const Obdd& obdd, const std::vector<FeatureId>& order);
bool is_complete(const Obdd& obdd);
// Largest number of reachable vertices testing one feature.
std::size_t obdd_width(const Obdd& obdd);
// Number of vertices reachable from the source, sinks included.
std::size_t obdd_size(const Obdd& obdd);

// ---------------------------------------------------------------------------
// Parameters

struct Parameters {
  std::size_t ens_size = 1;
  std::optional<std::size_t> mnl_size;
  std::optional<std::size_t> terms_elem;
  std::optional<std::size_t> term_size;
  std::optional<std::size_t> width_elem;
  std::size_t size_elem = 0;
  std::optional<std::size_t> xp_size;

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

std::size_t element_size(const ElementBody& element);
Parameters measure_parameters(const Model& model);

}  // namespace xplain
