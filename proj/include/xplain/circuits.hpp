#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xplain/explain.hpp"
#include "xplain/models.hpp"

namespace xplain {

enum class GateKind { input, and_gate, or_gate, not_gate, maj };

const char* gate_kind_name(GateKind kind);

struct Gate {
  GateKind kind = GateKind::input;
  FeatureId feature = 0;               // input gates
  std::vector<std::uint32_t> inputs;   // ids of earlier gates
  std::size_t threshold = 0;           // MAJ gates
};

// coefficient * 2^exponent, kept symbolic because the exponents get large.
struct WidthBound {
  std::size_t coefficient = 0;
  std::size_t exponent = 0;

  std::string to_string() const;
  friend bool operator==(const WidthBound&, const WidthBound&) = default;
};

// Gates in topological order; `output` is the unique sink.
struct Circuit {
  std::size_t num_features = 0;
  std::vector<Gate> gates;
  std::uint32_t output = 0;
  Label target_class = 1;  // the circuit accepts exactly the examples of this class
  std::string source;      // kind of the compiled model
  WidthBound width_bound;

  std::size_t count(GateKind kind) const;
};

// Hash-consing builder. Inputs and literals are shared; dead gates are
// dropped by finish().
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::size_t num_features);

  std::uint32_t input(FeatureId f);
  std::uint32_t literal(FeatureId f, int value);
  std::uint32_t constant(bool value);
  std::uint32_t and_of(std::vector<std::uint32_t> inputs);
  std::uint32_t or_of(std::vector<std::uint32_t> inputs);
  std::uint32_t not_of(std::uint32_t input);
  std::uint32_t maj(std::vector<std::uint32_t> inputs, std::size_t threshold);

  Circuit finish(std::uint32_t output) const;

 private:
  std::uint32_t push(Gate gate);

  std::size_t num_features_;
  std::vector<Gate> gates_;
  std::map<FeatureId, std::uint32_t> inputs_;
  std::map<std::pair<std::uint32_t, int>, std::uint32_t> negations_;
  std::optional<std::uint32_t> true_;
  std::optional<std::uint32_t> false_;
};

// Throws UnassignedInput when an input gate reads past the end of `alpha`.
bool eval(const Circuit& circuit, const Example& alpha);
TruthTable circuit_truth_table(const Circuit& circuit, std::size_t guard = kDefaultOracleGuard);

Circuit compile_dt(const DecisionTree& tree, Label c);
Circuit compile_dt_ensemble(const Ensemble& ensemble, Label c);
Circuit compile_dl(const DecisionList& list, Label c);
Circuit compile_dl_ensemble(const Ensemble& ensemble, Label c);  // lists or sets
Circuit compile_obdd(const Obdd& obdd, Label c);
Circuit compile_obdd_ensemble_ordered(const Ensemble& ensemble, Label c);
Circuit compile_model(const Model& model, Label c);

// Minimum witness by exhaustive search over the circuit's truth table. The
// budget of q caps the size.
std::optional<Witness> circuit_explain_bruteforce(const Circuit& circuit, const ExplanationQuery& q,
                                                  std::size_t guard = kDefaultOracleGuard);

nlohmann::json circuit_to_json(const Circuit& circuit, const FeatureSpace& space);
std::string circuit_to_dot(const Circuit& circuit, const FeatureSpace& space);

}  // namespace xplain
