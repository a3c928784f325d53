#include "xplain/circuits.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "xplain/dslist.hpp"
#include "xplain/error.hpp"

namespace xplain {

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::input: return "IN";
    case GateKind::and_gate: return "AND";
    case GateKind::or_gate: return "OR";
    case GateKind::not_gate: return "NOT";
    case GateKind::maj: return "MAJ";
  }
  return "?";
}

std::string WidthBound::to_string() const {
  if (exponent == 0) return std::to_string(coefficient);
  return std::to_string(coefficient) + "*2^" + std::to_string(exponent);
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

// ---------------------------------------------------------------------------

CircuitBuilder::CircuitBuilder(std::size_t num_features) : num_features_(num_features) {}

std::uint32_t CircuitBuilder::push(Gate gate) {
  gates_.push_back(std::move(gate));
  return static_cast<std::uint32_t>(gates_.size() - 1);
}

std::uint32_t CircuitBuilder::input(FeatureId f) {
  if (f >= num_features_) throw Error(ErrorKind::undefined_feature, "input gate outside the feature universe");
  if (auto it = inputs_.find(f); it != inputs_.end()) return it->second;
  Gate gate;
  gate.kind = GateKind::input;
  gate.feature = f;
  const std::uint32_t id = push(std::move(gate));
  inputs_.emplace(f, id);
  return id;
}

std::uint32_t CircuitBuilder::literal(FeatureId f, int value) {
  const std::uint32_t in = input(f);
  return value != 0 ? in : not_of(in);
}

std::uint32_t CircuitBuilder::constant(bool value) {
  auto& slot = value ? true_ : false_;
  if (slot) return *slot;
  if (num_features_ == 0) throw Error(ErrorKind::validation, "a constant circuit needs at least one feature");
  const std::uint32_t x = input(0);
  const std::uint32_t not_x = not_of(x);
  Gate gate;
  gate.kind = value ? GateKind::or_gate : GateKind::and_gate;
  gate.inputs = {x, not_x};
  slot = push(std::move(gate));
  return *slot;
}

std::uint32_t CircuitBuilder::and_of(std::vector<std::uint32_t> inputs) {
  if (inputs.empty()) return constant(true);
  if (inputs.size() == 1) return inputs.front();
  Gate gate;
  gate.kind = GateKind::and_gate;
  gate.inputs = std::move(inputs);
  return push(std::move(gate));
}

std::uint32_t CircuitBuilder::or_of(std::vector<std::uint32_t> inputs) {
  if (inputs.empty()) return constant(false);
  if (inputs.size() == 1) return inputs.front();
  Gate gate;
  gate.kind = GateKind::or_gate;
  gate.inputs = std::move(inputs);
  return push(std::move(gate));
}

std::uint32_t CircuitBuilder::not_of(std::uint32_t input) {
  const auto key = std::make_pair(input, 0);
  if (auto it = negations_.find(key); it != negations_.end()) return it->second;
  Gate gate;
  gate.kind = GateKind::not_gate;
  gate.inputs = {input};
  const std::uint32_t id = push(std::move(gate));
  negations_.emplace(key, id);
  return id;
}

std::uint32_t CircuitBuilder::maj(std::vector<std::uint32_t> inputs, std::size_t threshold) {
  if (inputs.empty()) throw Error(ErrorKind::validation, "MAJ gate without inputs");
  Gate gate;
  gate.kind = GateKind::maj;
  gate.inputs = std::move(inputs);
  gate.threshold = threshold;
  return push(std::move(gate));
}

Circuit CircuitBuilder::finish(std::uint32_t output) const {
  std::vector<std::uint8_t> live(gates_.size(), 0);
  live[output] = 1;
  for (std::size_t i = gates_.size(); i-- > 0;) {
    if (live[i] == 0) continue;
    for (std::uint32_t in : gates_[i].inputs) live[in] = 1;
  }
  std::vector<std::uint32_t> renamed(gates_.size(), 0);
  Circuit circuit;
  circuit.num_features = num_features_;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (live[i] == 0) continue;
    Gate gate = gates_[i];
    for (std::uint32_t& in : gate.inputs) in = renamed[in];
    renamed[i] = static_cast<std::uint32_t>(circuit.gates.size());
    circuit.gates.push_back(std::move(gate));
  }
  circuit.output = renamed[output];
  return circuit;
}

// ---------------------------------------------------------------------------

bool eval(const Circuit& circuit, const Example& alpha) {
  std::vector<std::uint8_t> value(circuit.gates.size(), 0);
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const Gate& gate = circuit.gates[i];
    switch (gate.kind) {
      case GateKind::input:
        if (gate.feature >= alpha.size()) throw Error(ErrorKind::unassigned_input, "input gate has no value");
        value[i] = static_cast<std::uint8_t>(alpha[gate.feature]);
        break;
      case GateKind::and_gate:
        value[i] = std::all_of(gate.inputs.begin(), gate.inputs.end(), [&](std::uint32_t in) { return value[in] != 0; });
        break;
      case GateKind::or_gate:
        value[i] = std::any_of(gate.inputs.begin(), gate.inputs.end(), [&](std::uint32_t in) { return value[in] != 0; });
        break;
      case GateKind::not_gate:
        value[i] = value[gate.inputs.front()] == 0 ? 1 : 0;
        break;
      case GateKind::maj: {
        const auto ones = static_cast<std::size_t>(
            std::count_if(gate.inputs.begin(), gate.inputs.end(), [&](std::uint32_t in) { return value[in] != 0; }));
        value[i] = ones >= gate.threshold ? 1 : 0;
        break;
      }
    }
  }
  return value[circuit.output] != 0;
}

TruthTable circuit_truth_table(const Circuit& circuit, std::size_t guard) {
  const std::size_t n = circuit.num_features;
  if (n > guard) {
    throw Error(ErrorKind::too_large,
                "circuit has " + std::to_string(n) + " inputs, guard is " + std::to_string(guard));
  }
  std::vector<std::size_t> last_use(circuit.gates.size(), 0);
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    for (std::uint32_t in : circuit.gates[i].inputs) last_use[in] = i;
  }
  last_use[circuit.output] = circuit.gates.size();
  std::vector<TruthTable> table(circuit.gates.size());
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const Gate& gate = circuit.gates[i];
    switch (gate.kind) {
      case GateKind::input:
        table[i] = TruthTable::literal(n, gate.feature, true);
        break;
      case GateKind::and_gate:
        table[i] = table[gate.inputs.front()];
        for (std::size_t j = 1; j < gate.inputs.size(); ++j) table[i] &= table[gate.inputs[j]];
        break;
      case GateKind::or_gate:
        table[i] = table[gate.inputs.front()];
        for (std::size_t j = 1; j < gate.inputs.size(); ++j) table[i] |= table[gate.inputs[j]];
        break;
      case GateKind::not_gate:
        table[i] = table[gate.inputs.front()];
        table[i].invert();
        break;
      case GateKind::maj: {
        std::vector<const TruthTable*> rows;
        for (std::uint32_t in : gate.inputs) rows.push_back(&table[in]);
        table[i] = threshold(rows, gate.threshold);
        break;
      }
    }
    for (std::uint32_t in : gate.inputs) {
      if (last_use[in] == i) table[in] = TruthTable{};
    }
  }
  return table[circuit.output];
}

// ---------------------------------------------------------------------------

namespace {

std::uint32_t emit_dt(CircuitBuilder& b, const DecisionTree& tree, Label c) {
  const std::size_t zeros = leaf_count(tree, 0);
  const std::size_t ones = leaf_count(tree, 1);
  const Label minority = ones < zeros ? 1 : 0;
  std::vector<std::uint32_t> leaves;
  for (const LeafPath& leaf : leaf_paths(tree)) {
    if (leaf.label != minority) continue;
    std::vector<std::uint32_t> lits;
    for (FeatureId f : leaf.path.domain()) lits.push_back(b.literal(f, leaf.path.value(f)));
    leaves.push_back(b.and_of(std::move(lits)));
  }
  const std::uint32_t hit = b.or_of(std::move(leaves));
  return minority == c ? hit : b.not_of(hit);
}

std::uint32_t emit_term(CircuitBuilder& b, const Term& term) {
  std::vector<std::uint32_t> lits;
  for (const Literal& lit : term) lits.push_back(b.literal(lit.feature, lit.value));
  return b.and_of(std::move(lits));
}

std::uint32_t emit_dl(CircuitBuilder& b, const DecisionList& list, Label c) {
  std::vector<std::uint32_t> blocked;  // negations of earlier blocks of the other class
  std::vector<std::uint32_t> wins;
  std::size_t i = 0;
  while (i < list.rules.size()) {
    const Label label = list.rules[i].label;
    std::vector<std::uint32_t> members;
    for (; i < list.rules.size() && list.rules[i].label == label; ++i) members.push_back(emit_term(b, list.rules[i].term));
    const std::uint32_t block = b.or_of(std::move(members));
    if (label == c) {
      std::vector<std::uint32_t> guard = blocked;
      guard.push_back(block);
      wins.push_back(b.and_of(std::move(guard)));
    } else {
      blocked.push_back(b.not_of(block));
    }
  }
  return b.or_of(std::move(wins));
}

std::uint32_t emit_obdd(CircuitBuilder& b, const Obdd& obdd, Label c) {
  const std::uint32_t accept = Obdd::sink(c);
  if (obdd.is_sink(obdd.source)) return b.constant(obdd.source == accept);
  std::vector<std::int64_t> gate(obdd.nodes.size(), -1);
  auto visit = [&](auto&& self, std::uint32_t id) -> std::uint32_t {
    if (gate[id] >= 0) return static_cast<std::uint32_t>(gate[id]);
    const ObddNode& node = obdd.nodes[id];
    std::vector<std::uint32_t> arcs;
    for (int v = 0; v < 2; ++v) {
      const std::uint32_t next = v == 0 ? node.zero : node.one;
      if (next == accept) {
        arcs.push_back(b.literal(node.feature, v));
      } else if (!obdd.is_sink(next)) {
        const std::uint32_t below = self(self, next);
        arcs.push_back(b.and_of({b.literal(node.feature, v), below}));
      }
    }
    const std::uint32_t out = b.or_of(std::move(arcs));
    gate[id] = out;
    return out;
  };
  return visit(visit, obdd.source);
}

Circuit finish(const CircuitBuilder& b, std::uint32_t output, Label c, const char* source, WidthBound bound) {
  Circuit circuit = b.finish(output);
  circuit.target_class = c;
  circuit.source = source;
  circuit.width_bound = bound;
  return circuit;
}

void check_odd(const Ensemble& ensemble) {
  if (ensemble.elements.empty()) throw Error(ErrorKind::validation, "ensemble has no elements");
  if (ensemble.elements.size() % 2 == 0) throw Error(ErrorKind::even_ensemble, "ensemble has an even size");
}

DecisionList as_list(const ElementBody& element) {
  if (const auto* list = std::get_if<DecisionList>(&element)) return *list;
  if (const auto* set = std::get_if<DecisionSet>(&element)) return ds_to_dl(*set);
  throw Error(ErrorKind::validation, "expected a decision list or set");
}

}  // namespace

Circuit compile_dt(const DecisionTree& tree, Label c) {
  CircuitBuilder b(tree.num_features);
  const std::uint32_t out = emit_dt(b, tree, c);
  return finish(b, out, c, "dt", WidthBound{3, mnl(tree)});
}

Circuit compile_dt_ensemble(const Ensemble& ensemble, Label c) {
  check_odd(ensemble);
  CircuitBuilder b(ensemble.num_features);
  std::vector<std::uint32_t> votes;
  std::size_t exponent = 0;
  for (const ElementBody& element : ensemble.elements) {
    const auto& tree = std::get<DecisionTree>(element);
    votes.push_back(emit_dt(b, tree, c));
    exponent += mnl(tree);
  }
  const std::uint32_t out = b.maj(std::move(votes), ensemble.threshold());
  return finish(b, out, c, "ensemble:dt", WidthBound{3, exponent});
}

Circuit compile_dl(const DecisionList& list, Label c) {
  CircuitBuilder b(list.num_features);
  const std::uint32_t out = emit_dl(b, list, c);
  return finish(b, out, c, "dl", WidthBound{3, 3 * list.rules.size()});
}

Circuit compile_dl_ensemble(const Ensemble& ensemble, Label c) {
  check_odd(ensemble);
  CircuitBuilder b(ensemble.num_features);
  std::vector<std::uint32_t> votes;
  std::size_t rules = 0;
  for (const ElementBody& element : ensemble.elements) {
    const DecisionList list = as_list(element);
    votes.push_back(emit_dl(b, list, c));
    rules += list.rules.size();
  }
  const std::uint32_t out = b.maj(std::move(votes), ensemble.threshold());
  return finish(b, out, c, "ensemble:dl", WidthBound{3, 3 * rules});
}

Circuit compile_obdd(const Obdd& obdd, Label c) {
  CircuitBuilder b(obdd.num_features);
  const std::uint32_t out = emit_obdd(b, obdd, c);
  return finish(b, out, c, "obdd", WidthBound{5 * obdd_width(complete_obdd(obdd)), 0});
}

Circuit compile_obdd_ensemble_ordered(const Ensemble& ensemble, Label c) {
  check_odd(ensemble);
  CircuitBuilder b(ensemble.num_features);
  std::vector<std::uint32_t> votes;
  std::size_t width = 0;
  for (const ElementBody& element : ensemble.elements) {
    const auto& obdd = std::get<Obdd>(element);
    votes.push_back(emit_obdd(b, obdd, c));
    width = std::max(width, obdd_width(complete_obdd(obdd)));
  }
  const std::uint32_t out = b.maj(std::move(votes), ensemble.threshold());
  return finish(b, out, c, "ensemble:obdd", WidthBound{3, ensemble.elements.size() * 5 * width});
}

Circuit compile_model(const Model& model, Label c) {
  switch (model.kind()) {
    case ModelKind::dt: return compile_dt(std::get<DecisionTree>(model.body), c);
    case ModelKind::ds: {
      Circuit circuit = compile_dl(ds_to_dl(std::get<DecisionSet>(model.body)), c);
      circuit.source = "ds";
      return circuit;
    }
    case ModelKind::dl: return compile_dl(std::get<DecisionList>(model.body), c);
    case ModelKind::obdd: return compile_obdd(std::get<Obdd>(model.body), c);
    case ModelKind::ensemble: {
      const auto& ensemble = std::get<Ensemble>(model.body);
      switch (model.element_kind()) {
        case ModelKind::dt: return compile_dt_ensemble(ensemble, c);
        case ModelKind::obdd: return compile_obdd_ensemble_ordered(ensemble, c);
        default: {
          Circuit circuit = compile_dl_ensemble(ensemble, c);
          if (model.element_kind() == ModelKind::ds) circuit.source = "ensemble:ds";
          return circuit;
        }
      }
    }
  }
  throw Error(ErrorKind::validation, "unknown model kind");
}

std::optional<Witness> circuit_explain_bruteforce(const Circuit& circuit, const ExplanationQuery& q,
                                                  std::size_t guard) {
  TruthTable positives = circuit_truth_table(circuit, guard);
  if (circuit.target_class == 0) positives.invert();
  return TableExplainer(std::move(positives)).minimum(q, q.budget());
}

// ---------------------------------------------------------------------------

nlohmann::json circuit_to_json(const Circuit& circuit, const FeatureSpace& space) {
  nlohmann::json gates = nlohmann::json::array();
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const Gate& gate = circuit.gates[i];
    nlohmann::json row{{"id", i}, {"kind", gate_kind_name(gate.kind)}, {"inputs", gate.inputs}};
    if (gate.kind == GateKind::input) row["feature"] = space.name(gate.feature);
    if (gate.kind == GateKind::maj) row["threshold"] = gate.threshold;
    gates.push_back(std::move(row));
  }
  return nlohmann::json{
      {"gates", std::move(gates)},
      {"output", circuit.output},
      {"class", circuit.target_class},
      {"source", circuit.source},
      {"width_bound",
       {{"coefficient", circuit.width_bound.coefficient},
        {"exponent", circuit.width_bound.exponent},
        {"text", circuit.width_bound.to_string()}}},
  };
}

std::string circuit_to_dot(const Circuit& circuit, const FeatureSpace& space) {
  std::ostringstream out;
  out << "digraph circuit {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const Gate& gate = circuit.gates[i];
    out << "  g" << i << " [label=\"";
    if (gate.kind == GateKind::input) {
      out << space.name(gate.feature);
    } else {
      out << gate_kind_name(gate.kind);
      if (gate.kind == GateKind::maj) out << " >=" << gate.threshold;
    }
    out << "\"";
    if (i == circuit.output) out << ", shape=doublecircle";
    out << "];\n";
    for (std::uint32_t in : gate.inputs) out << "  g" << in << " -> g" << i << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace xplain
