#include "xplain/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "xplain/error.hpp"

namespace xplain {

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorKind::validation, message); }

// Feature lookup while parsing: either against a declared list or collecting
// new names as they appear.
class Names {
 public:
  Names(FeatureSpace& space, bool declared) : space_(space), declared_(declared) {}

  FeatureId operator()(const Json& name) {
    if (!name.is_string()) invalid("feature names must be strings");
    const auto& text = name.get_ref<const std::string&>();
    return declared_ ? space_.at(text) : space_.add(text);
  }

 private:
  FeatureSpace& space_;
  bool declared_;
};

const Json& field(const Json& object, const char* key) {
  if (!object.is_object()) invalid(std::string("expected an object holding '") + key + "'");
  auto it = object.find(key);
  if (it == object.end()) invalid(std::string("missing field '") + key + "'");
  return *it;
}

int bit(const Json& value, const char* what) {
  if (!value.is_number_integer()) invalid(std::string(what) + " must be 0 or 1");
  const auto v = value.get<long long>();
  if (v != 0 && v != 1) invalid(std::string(what) + " must be 0 or 1");
  return static_cast<int>(v);
}

long long integer(const Json& value, const char* what) {
  if (!value.is_number_integer()) invalid(std::string(what) + " must be an integer");
  return value.get<long long>();
}

Term parse_term(const Json& json, Names& names) {
  if (!json.is_array()) invalid("a term must be an array of [feature, value] pairs");
  Term term;
  for (const Json& literal : json) {
    if (!literal.is_array() || literal.size() != 2) invalid("a literal must be a [feature, value] pair");
    term.push_back(Literal{names(literal[0]), bit(literal[1], "literal value")});
  }
  term = normalize_term(std::move(term));
  if (is_contradictory(term)) invalid("term contains contradictory literals");
  return term;
}

Json term_to_json(const Term& term, const FeatureSpace& space) {
  Json out = Json::array();
  for (const Literal& lit : term) out.push_back(Json::array({space.name(lit.feature), lit.value}));
  return out;
}

DecisionTree parse_tree(const Json& json, Names& names) {
  const Json& nodes = field(json, "nodes");
  if (!nodes.is_array() || nodes.empty()) invalid("'nodes' must be a non-empty array");
  std::map<long long, std::uint32_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const long long id = integer(field(nodes[i], "id"), "node id");
    if (!index.emplace(id, static_cast<std::uint32_t>(i)).second) invalid("duplicate node id");
  }
  auto resolve = [&](const Json& ref) {
    auto it = index.find(integer(ref, "node reference"));
    if (it == index.end()) invalid("reference to an unknown node");
    return it->second;
  };
  DecisionTree tree;
  for (const Json& node : nodes) {
    if (node.contains("leaf")) {
      tree.add_leaf(bit(node["leaf"], "leaf label"));
    } else {
      const FeatureId f = names(field(node, "feature"));
      tree.add_node(f, resolve(field(node, "zero")), resolve(field(node, "one")));
    }
  }
  tree.root = resolve(field(json, "root"));
  return tree;
}

Json tree_to_json(const DecisionTree& tree, const FeatureSpace& space) {
  Json nodes = Json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const DtNode& node = tree.nodes[i];
    if (node.is_leaf()) {
      nodes.push_back({{"id", i}, {"leaf", node.label}});
    } else {
      nodes.push_back({{"id", i}, {"feature", space.name(node.feature)}, {"zero", node.zero}, {"one", node.one}});
    }
  }
  return {{"kind", "dt"}, {"root", tree.root}, {"nodes", nodes}};
}

DecisionSet parse_set(const Json& json, Names& names) {
  DecisionSet set;
  const Json& terms = field(json, "terms");
  if (!terms.is_array()) invalid("'terms' must be an array");
  for (const Json& term : terms) set.terms.push_back(parse_term(term, names));
  set.default_class = bit(field(json, "default"), "default class");
  return set;
}

Json set_to_json(const DecisionSet& set, const FeatureSpace& space) {
  Json terms = Json::array();
  for (const Term& term : set.terms) terms.push_back(term_to_json(term, space));
  return {{"kind", "ds"}, {"terms", terms}, {"default", set.default_class}};
}

DecisionList parse_list(const Json& json, Names& names) {
  DecisionList list;
  const Json& rules = field(json, "rules");
  if (!rules.is_array()) invalid("'rules' must be an array");
  for (const Json& rule : rules) {
    list.rules.push_back(Rule{parse_term(field(rule, "term"), names), bit(field(rule, "class"), "rule class")});
  }
  return list;
}

Json list_to_json(const DecisionList& list, const FeatureSpace& space) {
  Json rules = Json::array();
  for (const Rule& rule : list.rules) rules.push_back({{"term", term_to_json(rule.term, space)}, {"class", rule.label}});
  return {{"kind", "dl"}, {"rules", rules}};
}

std::vector<FeatureId> parse_order(const Json& json, Names& names) {
  if (!json.is_array()) invalid("an order must be an array of feature names");
  std::vector<FeatureId> order;
  for (const Json& name : json) order.push_back(names(name));
  return order;
}

Json order_to_json(const std::vector<FeatureId>& order, const FeatureSpace& space) {
  Json out = Json::array();
  for (FeatureId f : order) out.push_back(space.name(f));
  return out;
}

Obdd parse_obdd(const Json& json, Names& names) {
  Obdd obdd;
  if (json.contains("order")) obdd.order = parse_order(json["order"], names);
  std::map<long long, std::uint32_t> index;
  const long long t0 = integer(field(json, "t0"), "t0");
  const long long t1 = integer(field(json, "t1"), "t1");
  if (t0 == t1) invalid("t0 and t1 must be distinct");
  index[t0] = Obdd::kFalse;
  index[t1] = Obdd::kTrue;
  const Json& nodes = json.contains("nodes") ? json["nodes"] : Json::array();
  if (!nodes.is_array()) invalid("'nodes' must be an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const long long id = integer(field(nodes[i], "id"), "node id");
    if (!index.emplace(id, static_cast<std::uint32_t>(i + 2)).second) invalid("duplicate OBDD vertex id");
  }
  auto resolve = [&](const Json& ref) {
    auto it = index.find(integer(ref, "vertex reference"));
    if (it == index.end()) invalid("reference to an unknown OBDD vertex");
    return it->second;
  };
  for (const Json& node : nodes) {
    const FeatureId f = names(field(node, "feature"));
    obdd.add_node(f, resolve(field(node, "zero")), resolve(field(node, "one")));
  }
  obdd.source = resolve(field(json, "source"));
  return obdd;
}

Json obdd_to_json(const Obdd& obdd, const FeatureSpace& space) {
  Json nodes = Json::array();
  for (std::size_t i = 2; i < obdd.nodes.size(); ++i) {
    const ObddNode& node = obdd.nodes[i];
    nodes.push_back({{"id", i}, {"feature", space.name(node.feature)}, {"zero", node.zero}, {"one", node.one}});
  }
  return {{"kind", "obdd"}, {"source", obdd.source}, {"t0", Obdd::kFalse}, {"t1", Obdd::kTrue},
          {"order", order_to_json(obdd.order, space)}, {"nodes", nodes}};
}

ElementBody parse_element(const Json& json, Names& names) {
  const std::string kind = field(json, "kind").get<std::string>();
  if (kind == "dt") return parse_tree(json, names);
  if (kind == "ds") return parse_set(json, names);
  if (kind == "dl") return parse_list(json, names);
  if (kind == "obdd") return parse_obdd(json, names);
  if (kind == "ensemble") invalid("nested ensembles are not supported");
  invalid("unknown model kind '" + kind + "'");
}

Json element_to_json(const ElementBody& element, const FeatureSpace& space) {
  struct Visitor {
    const FeatureSpace& space;
    Json operator()(const DecisionTree& t) const { return tree_to_json(t, space); }
    Json operator()(const DecisionSet& s) const { return set_to_json(s, space); }
    Json operator()(const DecisionList& l) const { return list_to_json(l, space); }
    Json operator()(const Obdd& o) const { return obdd_to_json(o, space); }
  };
  return std::visit(Visitor{space}, element);
}

// Structural checks first, then the normal form used everywhere else.
void finish_element(ElementBody& element, std::size_t n) {
  std::visit([n](auto& m) { m.num_features = n; }, element);
  if (auto* tree = std::get_if<DecisionTree>(&element)) {
    validate(*tree);
    *tree = simplify_dt(*tree);
  } else if (auto* obdd = std::get_if<Obdd>(&element)) {
    validate(*obdd);
    if (obdd->order.empty()) obdd->order = infer_order(*obdd);
    *obdd = canonical_obdd(*obdd);
  }
}

template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& ex) {
    throw Error(ErrorKind::parse, ex.what());
  }
}

}  // namespace

Model model_from_json(const Json& json) {
  return guarded([&] {
    Model model;
    const bool declared = json.is_object() && json.contains("features");
    if (declared) {
      std::vector<std::string> list;
      for (const Json& name : json["features"]) list.push_back(name.get<std::string>());
      model.features = FeatureSpace(std::move(list));
    }
    Names names(model.features, declared);
    const std::string kind = field(json, "kind").get<std::string>();
    if (kind == "ensemble") {
      Ensemble ensemble;
      const Json& elements = field(json, "elements");
      if (!elements.is_array()) invalid("'elements' must be an array");
      for (const Json& element : elements) ensemble.elements.push_back(parse_element(element, names));
      if (json.contains("shared_order") && !json["shared_order"].is_null()) {
        ensemble.shared_order = parse_order(json["shared_order"], names);
      }
      const std::size_t n = model.features.size();
      ensemble.num_features = n;
      for (ElementBody& element : ensemble.elements) finish_element(element, n);
      model.body = std::move(ensemble);
    } else {
      ElementBody element = parse_element(json, names);
      finish_element(element, model.features.size());
      model.body = std::visit([](auto&& m) -> ModelBody { return std::move(m); }, std::move(element));
    }
    validate(model);
    return model;
  });
}

Json model_to_json(const Model& model) {
  Json out;
  if (const auto* ensemble = std::get_if<Ensemble>(&model.body)) {
    Json elements = Json::array();
    for (const ElementBody& element : ensemble->elements) elements.push_back(element_to_json(element, model.features));
    out = {{"kind", "ensemble"}, {"elements", elements}};
    if (ensemble->shared_order) out["shared_order"] = order_to_json(*ensemble->shared_order, model.features);
  } else {
    out = std::visit(
        [&](const auto& m) -> Json {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Ensemble>) {
            return Json{};
          } else {
            return element_to_json(ElementBody{m}, model.features);
          }
        },
        model.body);
  }
  out["features"] = model.features.names();
  return out;
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& ex) {
    throw Error(ErrorKind::parse, ex.what());
  }
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot read model file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(parse_json_text(buffer.str()));
}

void save_model(const std::filesystem::path& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << canonical_dump(model_to_json(model));
}

std::string canonical_dump(const Json& json) { return json.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

Example example_from_json(const Json& json, const FeatureSpace& space) {
  return guarded([&] {
    if (!json.is_object()) invalid("an example must be an object of feature -> 0|1");
    Example e(space.size());
    std::vector<std::uint8_t> seen(space.size(), 0);
    for (const auto& [name, value] : json.items()) {
      const FeatureId f = space.at(name);
      e.set(f, bit(value, "feature value"));
      seen[f] = 1;
    }
    for (FeatureId f = 0; f < space.size(); ++f) {
      if (seen[f] == 0) throw Error(ErrorKind::undefined_feature, "example leaves '" + space.name(f) + "' unassigned");
    }
    return e;
  });
}

Json example_to_json(const Example& e, const FeatureSpace& space) {
  Json out = Json::object();
  for (FeatureId f = 0; f < e.size(); ++f) out[space.name(f)] = e[f];
  return out;
}

PartialExample partial_from_json(const Json& json, const FeatureSpace& space) {
  return guarded([&] {
    if (!json.is_object()) invalid("a partial example must be an object of feature -> 0|1");
    PartialExample tau(space.size());
    for (const auto& [name, value] : json.items()) tau.set(space.at(name), bit(value, "feature value"));
    return tau;
  });
}

Json partial_to_json(const PartialExample& tau, const FeatureSpace& space) {
  Json out = Json::object();
  for (FeatureId f : tau.domain()) out[space.name(f)] = tau.value(f);
  return out;
}

FeatureSet feature_set_from_json(const Json& json, const FeatureSpace& space) {
  return guarded([&] {
    if (!json.is_array()) invalid("a feature set must be an array of names");
    FeatureSet set;
    for (const Json& name : json) set.push_back(space.at(name.get<std::string>()));
    return normalize_feature_set(std::move(set));
  });
}

Json feature_set_to_json(const FeatureSet& set, const FeatureSpace& space) {
  std::vector<std::string> names;
  for (FeatureId f : set) names.push_back(space.name(f));
  std::sort(names.begin(), names.end());
  return names;
}

ExplanationQuery query_from_json(const Json& json, const FeatureSpace& space) {
  return guarded([&]() -> ExplanationQuery {
    const auto kind = parse_xp_kind(field(json, "kind").get<std::string>());
    if (!kind) invalid("query kind must be one of lAXp, lCXp, gAXp, gCXp");
    std::optional<std::size_t> budget;
    if (json.contains("k") && !json["k"].is_null()) {
      const long long k = integer(json["k"], "k");
      if (k < 0) invalid("k must be non-negative");
      budget = static_cast<std::size_t>(k);
    }
    std::string minimality = budget ? "cardinality" : "subset";
    if (json.contains("minimality")) minimality = json["minimality"].get<std::string>();
    if (minimality == "cardinality") {
      if (!budget) budget = space.size();
    } else if (minimality == "subset") {
      if (budget) invalid("a budget is only allowed for cardinality queries");
    } else {
      invalid("minimality must be 'subset' or 'cardinality'");
    }
    const Json& target = field(json, "target");
    if (is_local(*kind)) {
      Example e = target.is_string() && target.get<std::string>() == "e0" ? Example(space.size())
                                                                          : example_from_json(target, space);
      return budget ? ExplanationQuery::local(*kind, std::move(e), *budget)
                    : ExplanationQuery::local(*kind, std::move(e));
    }
    const int c = bit(target, "target class");
    return budget ? ExplanationQuery::global(*kind, c, *budget) : ExplanationQuery::global(*kind, c);
  });
}

Json query_to_json(const ExplanationQuery& q, const FeatureSpace& space) {
  Json out = {{"kind", std::string(xp_kind_name(q.kind()))},
              {"minimality", q.minimality() == Minimality::subset ? "subset" : "cardinality"}};
  if (q.local()) {
    out["target"] = example_to_json(q.example(), space);
  } else {
    out["target"] = q.target_class();
  }
  if (q.budget()) out["k"] = *q.budget();
  return out;
}

Witness witness_from_json(const Json& json, const FeatureSpace& space, bool local) {
  if (local) return Witness(feature_set_from_json(json, space));
  return Witness(partial_from_json(json, space));
}

Json witness_to_json(const Witness& w, const FeatureSpace& space) {
  return w.local() ? feature_set_to_json(w.features(), space) : partial_to_json(w.assignment(), space);
}

}  // namespace xplain
