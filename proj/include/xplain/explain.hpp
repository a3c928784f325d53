#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <variant>

#include "xplain/features.hpp"
#include "xplain/kernels.hpp"
#include "xplain/models.hpp"

namespace xplain {

enum class XpKind { lAXp, lCXp, gAXp, gCXp };
enum class Minimality { subset, cardinality };

std::string_view xp_kind_name(XpKind kind);
std::optional<XpKind> parse_xp_kind(std::string_view text);
inline bool is_local(XpKind kind) { return kind == XpKind::lAXp || kind == XpKind::lCXp; }

// What to explain. Local kinds target an example, global kinds a class.
// A budget is present exactly for cardinality queries.
class ExplanationQuery {
 public:
  static ExplanationQuery local(XpKind kind, Example e);
  static ExplanationQuery local(XpKind kind, Example e, std::size_t budget);
  static ExplanationQuery global(XpKind kind, Label target);
  static ExplanationQuery global(XpKind kind, Label target, std::size_t budget);

  XpKind kind() const { return kind_; }
  Minimality minimality() const { return budget_ ? Minimality::cardinality : Minimality::subset; }
  bool local() const { return is_local(kind_); }
  const Example& example() const { return *example_; }
  Label target_class() const { return target_; }
  std::optional<std::size_t> budget() const { return budget_; }

  ExplanationQuery with_budget(std::optional<std::size_t> budget) const;

 private:
  ExplanationQuery(XpKind kind, std::optional<Example> e, Label target, std::optional<std::size_t> budget);

  XpKind kind_;
  std::optional<Example> example_;
  Label target_ = 0;
  std::optional<std::size_t> budget_;
};

// A feature set (local kinds) or a partial assignment (global kinds).
class Witness {
 public:
  Witness(FeatureSet features) : payload_(normalize_feature_set(std::move(features))) {}  // NOLINT
  Witness(PartialExample assignment) : payload_(std::move(assignment)) {}                  // NOLINT

  bool local() const { return std::holds_alternative<FeatureSet>(payload_); }
  const FeatureSet& features() const { return std::get<FeatureSet>(payload_); }
  const PartialExample& assignment() const { return std::get<PartialExample>(payload_); }
  std::size_t size() const;

  friend bool operator==(const Witness&, const Witness&) = default;

 private:
  std::variant<FeatureSet, PartialExample> payload_;
};

inline constexpr std::size_t kDefaultOracleGuard = 20;

// Packed truth table of the model (bit x = class of Example::from_bits(x)).
// Throws TooLarge above `guard` features.
TruthTable model_truth_table(const Model& model, std::size_t guard = kDefaultOracleGuard);
TruthTable element_truth_table(const ElementBody& element, std::size_t num_features);

// Definitional checks over a complete truth table.
class TableExplainer {
 public:
  explicit TableExplainer(TruthTable positives);

  std::size_t num_features() const { return positives_.vars(); }
  Label classify(std::uint64_t index) const { return positives_.get(index) ? 1 : 0; }
  Label classify(const Example& e) const { return classify(e.to_bits()); }

  // Every example agreeing with τ has class c.
  bool forces(const PartialExample& tau, Label c) const;
  bool holds(const ExplanationQuery& q, const Witness& w) const;
  std::optional<Witness> minimum(const ExplanationQuery& q, std::optional<std::size_t> max_size = {}) const;

 private:
  TruthTable positives_;
  TruthTable negatives_;
};

// Candidate enumeration shared by the oracle and the XP searches: sizes
// ascending, subsets in lexicographic index order, and for global kinds the
// assignments of each subset by binary counting with the lowest feature as
// the most significant bit.
std::optional<Witness> enumerate_minimum(bool local, std::size_t num_features, std::size_t max_size,
                                         const std::function<bool(const Witness&)>& accept);

// Checks a candidate witness against the definition of q.kind().
bool is_explanation(const Model& model, const ExplanationQuery& q, const Witness& w,
                    std::size_t guard = kDefaultOracleGuard);
// Minimum-cardinality witness, ignoring the budget; nullopt if none exists.
std::optional<Witness> oracle_min(const Model& model, const ExplanationQuery& q,
                                  std::size_t guard = kDefaultOracleGuard);
bool verify_subset_minimal(const Model& model, const ExplanationQuery& q, const Witness& w,
                           std::size_t guard = kDefaultOracleGuard);

// Subset-minimality from any validity predicate; the four kinds are monotone,
// so single deletions suffice.
bool subset_minimal_by(const Witness& w, const std::function<bool(const Witness&)>& valid);

Witness without(const Witness& w, FeatureId f);

// Validity of w for q given a predicate deciding whether every example that
// agrees with a partial assignment has a given class. `example_class` is the
// class of the query's example (ignored for global kinds).
bool holds_via(const ExplanationQuery& q, const Witness& w, Label example_class,
               const std::function<bool(const PartialExample&, Label)>& forces);

}  // namespace xplain
