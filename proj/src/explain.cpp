#include "xplain/explain.hpp"

#include <stdexcept>

#include "kernels_internal.hpp"
#include "xplain/error.hpp"

namespace xplain {

std::string_view xp_kind_name(XpKind kind) {
  switch (kind) {
    case XpKind::lAXp: return "lAXp";
    case XpKind::lCXp: return "lCXp";
    case XpKind::gAXp: return "gAXp";
    case XpKind::gCXp: return "gCXp";
  }
  return "?";
}

std::optional<XpKind> parse_xp_kind(std::string_view text) {
  for (XpKind kind : {XpKind::lAXp, XpKind::lCXp, XpKind::gAXp, XpKind::gCXp}) {
    if (xp_kind_name(kind) == text) return kind;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

ExplanationQuery::ExplanationQuery(XpKind kind, std::optional<Example> e, Label target,
                                   std::optional<std::size_t> budget)
    : kind_(kind), example_(std::move(e)), target_(target), budget_(budget) {
  if (is_local(kind) != example_.has_value()) throw std::invalid_argument("query target does not match its kind");
  if (target_ != 0 && target_ != 1) throw std::invalid_argument("class label must be 0 or 1");
}

ExplanationQuery ExplanationQuery::local(XpKind kind, Example e) {
  return ExplanationQuery(kind, std::move(e), 0, std::nullopt);
}

ExplanationQuery ExplanationQuery::local(XpKind kind, Example e, std::size_t budget) {
  return ExplanationQuery(kind, std::move(e), 0, budget);
}

ExplanationQuery ExplanationQuery::global(XpKind kind, Label target) {
  return ExplanationQuery(kind, std::nullopt, target, std::nullopt);
}

ExplanationQuery ExplanationQuery::global(XpKind kind, Label target, std::size_t budget) {
  return ExplanationQuery(kind, std::nullopt, target, budget);
}

ExplanationQuery ExplanationQuery::with_budget(std::optional<std::size_t> budget) const {
  return ExplanationQuery(kind_, example_, target_, budget);
}

std::size_t Witness::size() const { return local() ? features().size() : assignment().size(); }

Witness without(const Witness& w, FeatureId f) {
  if (w.local()) {
    FeatureSet rest;
    for (FeatureId g : w.features()) {
      if (g != f) rest.push_back(g);
    }
    return Witness(std::move(rest));
  }
  PartialExample tau = w.assignment();
  tau.erase(f);
  return Witness(std::move(tau));
}

bool holds_via(const ExplanationQuery& q, const Witness& w, Label example_class,
               const std::function<bool(const PartialExample&, Label)>& forces) {
  if (q.local() != w.local()) throw std::invalid_argument("witness shape does not match the query kind");
  switch (q.kind()) {
    case XpKind::lAXp:
      return forces(PartialExample::restriction(q.example(), w.features()), example_class);
    case XpKind::lCXp: {
      const FeatureSet rest = complement(w.features(), q.example().size());
      return !forces(PartialExample::restriction(q.example(), rest), example_class);
    }
    case XpKind::gAXp:
      return forces(w.assignment(), q.target_class());
    case XpKind::gCXp:
      return forces(w.assignment(), 1 - q.target_class());
  }
  return false;
}

bool subset_minimal_by(const Witness& w, const std::function<bool(const Witness&)>& valid) {
  if (!valid(w)) return false;
  const FeatureSet members = w.local() ? w.features() : w.assignment().domain();
  for (FeatureId f : members) {
    if (valid(without(w, f))) return false;
  }
  return true;
}

std::optional<Witness> enumerate_minimum(bool local, std::size_t n, std::size_t max_size,
                                         const std::function<bool(const Witness&)>& accept) {
  const std::size_t top = std::min(max_size, n);
  for (std::size_t size = 0; size <= top; ++size) {
    std::vector<FeatureId> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = static_cast<FeatureId>(i);
    while (true) {
      if (local) {
        Witness candidate{FeatureSet(pick)};
        if (accept(candidate)) return candidate;
      } else {
        const std::uint64_t combos = std::uint64_t{1} << size;
        for (std::uint64_t bits = 0; bits < combos; ++bits) {
          PartialExample tau(n);
          for (std::size_t j = 0; j < size; ++j) tau.set(pick[j], static_cast<int>((bits >> (size - 1 - j)) & 1U));
          Witness candidate{std::move(tau)};
          if (accept(candidate)) return candidate;
        }
      }
      // Next subset in lexicographic order.
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

TableExplainer::TableExplainer(TruthTable positives) : positives_(std::move(positives)), negatives_(positives_) {
  negatives_.invert();
}

bool TableExplainer::forces(const PartialExample& tau, Label c) const {
  const TruthTable& wrong = c == 1 ? negatives_ : positives_;
  const std::size_t n = wrong.vars();
  if (tau.universe() != n) throw std::invalid_argument("assignment over a different universe");
  kernels::Word low = ~kernels::Word{0};
  std::uint64_t fixed_mask = 0;
  std::uint64_t fixed_value = 0;
  for (std::size_t f = 0; f < n; ++f) {
    const int v = tau.value(static_cast<FeatureId>(f));
    if (v < 0) continue;
    if (f < 6) {
      low &= v == 1 ? kernels::detail::kLowVariableMask[f] : ~kernels::detail::kLowVariableMask[f];
    } else {
      fixed_mask |= std::uint64_t{1} << (f - 6);
      fixed_value |= static_cast<std::uint64_t>(v) << (f - 6);
    }
  }
  const std::uint64_t all_words = wrong.word_count() - 1;
  const std::uint64_t free_words = all_words & ~fixed_mask;
  const auto words = wrong.words();
  std::uint64_t sub = 0;
  do {
    if ((words[fixed_value | sub] & low) != 0) return false;
    sub = (sub - free_words) & free_words;
  } while (sub != 0);
  return true;
}

bool TableExplainer::holds(const ExplanationQuery& q, const Witness& w) const {
  const Label example_class = q.local() ? classify(q.example()) : 0;
  return holds_via(q, w, example_class, [this](const PartialExample& tau, Label c) { return forces(tau, c); });
}

std::optional<Witness> TableExplainer::minimum(const ExplanationQuery& q, std::optional<std::size_t> max_size) const {
  const std::size_t n = num_features();
  return enumerate_minimum(q.local(), n, max_size.value_or(n), [&](const Witness& w) { return holds(q, w); });
}

// ---------------------------------------------------------------------------

bool is_explanation(const Model& model, const ExplanationQuery& q, const Witness& w, std::size_t guard) {
  return TableExplainer(model_truth_table(model, guard)).holds(q, w);
}

std::optional<Witness> oracle_min(const Model& model, const ExplanationQuery& q, std::size_t guard) {
  return TableExplainer(model_truth_table(model, guard)).minimum(q);
}

bool verify_subset_minimal(const Model& model, const ExplanationQuery& q, const Witness& w, std::size_t guard) {
  const TableExplainer explainer(model_truth_table(model, guard));
  return subset_minimal_by(w, [&](const Witness& candidate) { return explainer.holds(q, candidate); });
}

}  // namespace xplain
