#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xplain/explain.hpp"
#include "xplain/models.hpp"

namespace xplain {

// Graph with a proper k-colouring: vertex v lies in part[v].
struct MccInstance {
  std::vector<std::string> names;
  std::vector<std::size_t> part;
  std::size_t k = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // u < v, sorted

  std::size_t size() const { return names.size(); }
  bool adjacent(std::uint32_t u, std::uint32_t v) const;
  std::vector<std::uint32_t> members(std::size_t i) const;

  // Vertices named "v1".."vn"; parts given per vertex.
  static MccInstance make(std::vector<std::size_t> part, std::size_t k,
                          std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);
};

// {"parts": [[names...], ...], "edges": [[u, v], ...]}; k is the number of parts.
MccInstance mcc_from_json(const nlohmann::json& json);
nlohmann::json mcc_to_json(const MccInstance& g);
// Validates the colouring and the edge list.
void validate(const MccInstance& g);
// One vertex per part, pairwise adjacent.
bool has_multicolored_clique(const MccInstance& g);

// A generated model with the query whose answer encodes the source instance.
struct GadgetInstance {
  Model model;
  ExplanationQuery query;
};

// Ordered tree accepting exactly the given examples on `features`, which also
// fixes the test order. Values outside `features` are ignored.
DecisionTree dt_from_examples(const std::vector<Example>& examples, const std::vector<FeatureId>& features,
                              std::size_t num_features);

// Universe {1..universe}; sets of elements. Feature u_i per element; the query
// asks for a cardinality lAXp of the all-zero example with budget k.
GadgetInstance gen_hitting_set_laxp(std::size_t universe, const std::vector<std::vector<std::size_t>>& sets,
                                    std::size_t k);

inline constexpr std::size_t kMaxGaxpCliqueSize = 10;

// Tree whose gAXp for class 0 with budget k exists iff the graph has a
// multicoloured clique. Vertex features come first, then fresh padding features.
GadgetInstance gen_mcc_gaxp_dt(const MccInstance& g, std::size_t max_k = kMaxGaxpCliqueSize);

// Majority of 2(k + C(k,2)) - 1 trees that is non-homogeneous iff a clique exists.
GadgetInstance gen_mcc_dt_ensemble(const MccInstance& g);

enum class HomFamily { dt, ds, obdd };
// p-HOM ensemble from per-vertex and per-non-edge elements.
GadgetInstance gen_maj_hom(const MccInstance& g, HomFamily family);

struct Dnf {
  std::vector<std::string> variables;
  std::vector<Term> terms;
};

struct TautInstance {
  GadgetInstance instance;
  bool trivial_no = false;  // the all-zero assignment falsifies the formula
};

TautInstance gen_taut_ds(const Dnf& psi);
GadgetInstance gen_mcc_ds(const MccInstance& g);
GadgetInstance gen_mcc_ds_ensemble(const MccInstance& g);

// ---------------------------------------------------------------------------
// OBDD gadgets. `features` fixes the order; all outputs are complete.

enum class ObddPrimitive { exactly_one, exists, iff_exists, all_equal };

// For iff_exists, `special` is the feature compared against the others and is
// read last.
Obdd obdd_primitive(ObddPrimitive kind, const std::vector<FeatureId>& features, std::size_t num_features,
                    std::optional<FeatureId> special = std::nullopt);

// Accepts iff every piece accepts. Pieces must not share features; a failing
// piece continues along a bypass track to the 0-sink.
Obdd obdd_conjoin(const std::vector<Obdd>& pieces);

// Three OBDDs over different orders; non-homogeneous iff a clique exists.
GadgetInstance gen_mcc_obdd_maj(const MccInstance& g);

// Classifies e' as out_class iff e' agrees with e on at least k features of `order`.
Obdd obdd_agreement_counter(const Example& e, std::size_t k, const std::vector<FeatureId>& order, Label out_class);

// Product of {O, agreement counter for (e, k), constant 1 - O(e)}. The query is
// gAXp for O(e) with budget k.
GadgetInstance gen_laxp_to_gaxp(const Obdd& obdd, const FeatureSpace& space, const Example& e, std::size_t k);

}  // namespace xplain
