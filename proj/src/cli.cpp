#include "xplain/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli_internal.hpp"
#include "xplain/circuits.hpp"
#include "xplain/dslist.hpp"
#include "xplain/error.hpp"
#include "xplain/gadgets.hpp"
#include "xplain/obdd.hpp"

namespace xplain::cli {

namespace {

[[noreturn]] void bad_route(const std::string& route, const std::string& why) {
  throw Error(ErrorKind::validation, "route " + route + ": " + why);
}

bool is_card_lcxp(const ExplanationQuery& q) {
  return q.kind() == XpKind::lCXp && q.minimality() == Minimality::cardinality;
}

// lCXp answers from a minimum-cardinality routine, cut at the budget.
template <typename MinLcxp>
std::optional<Witness> bounded_lcxp(const ExplanationQuery& q, MinLcxp&& min_lcxp) {
  try {
    Witness w = min_lcxp();
    if (q.budget() && w.size() > *q.budget()) return std::nullopt;
    return w;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::homogeneous) return std::nullopt;
    throw;
  }
}

std::optional<Witness> via_dt(const DecisionTree& tree, const ExplanationQuery& q) {
  if (q.kind() == XpKind::lCXp) return bounded_lcxp(q, [&] { return dt_min_lcxp(tree, q.example()); });
  if (q.minimality() == Minimality::subset) return dt_subset_min(tree, q);
  return dt_xp_search(tree, q);
}

std::optional<Witness> via_obdd(const Obdd& obdd, const ExplanationQuery& q) {
  if (q.kind() == XpKind::lCXp) return bounded_lcxp(q, [&] { return obdd_min_lcxp(obdd, q.example()); });
  if (q.minimality() == Minimality::subset) return obdd_subset_min(obdd, q);
  return obdd_xp_search(obdd, q);
}

std::optional<Witness> via_table(const Model& model, const ExplanationQuery& q, std::size_t guard) {
  return TableExplainer(model_truth_table(model, guard)).minimum(q, q.budget());
}

std::optional<Witness> via_circuit(const Model& model, const ExplanationQuery& q, std::size_t guard) {
  return circuit_explain_bruteforce(compile_model(model, 1), q, guard);
}

std::optional<Witness> via_branching(const Model& model, const ExplanationQuery& q) {
  if (!is_card_lcxp(q)) bad_route("branching", "needs a cardinality lCXp query");
  const std::size_t k = *q.budget();
  switch (model.kind()) {
    case ModelKind::dl: return dl_min_lcxp_branch(std::get<DecisionList>(model.body), q.example(), k);
    case ModelKind::ds: return dl_min_lcxp_branch(ds_to_dl(std::get<DecisionSet>(model.body)), q.example(), k);
    case ModelKind::ensemble:
      if (model.element_kind() == ModelKind::dl || model.element_kind() == ModelKind::ds) {
        return dle_min_lcxp_branch(std::get<Ensemble>(model.body), q.example(), k);
      }
      break;
    default: break;
  }
  bad_route("branching", "needs decision lists or sets");
}

const Ensemble& ensemble_of(const Model& model, ModelKind element, const std::string& route) {
  if (model.kind() != ModelKind::ensemble || model.element_kind() != element) {
    bad_route(route, std::string("needs an ensemble of ") + model_kind_name(element) + " elements");
  }
  return std::get<Ensemble>(model.body);
}

std::optional<Witness> run_route(const std::string& route, const Model& model, const ExplanationQuery& q,
                                 const SolveOptions& options) {
  if (route == "dt") {
    if (model.kind() != ModelKind::dt) bad_route(route, "needs a decision tree");
    return via_dt(std::get<DecisionTree>(model.body), q);
  }
  if (route == "obdd") {
    if (model.kind() != ModelKind::obdd) bad_route(route, "needs an OBDD");
    return via_obdd(std::get<Obdd>(model.body), q);
  }
  if (route == "dt-product") {
    return via_dt(dt_ensemble_to_dt(ensemble_of(model, ModelKind::dt, route), options.cap_nodes), q);
  }
  if (route == "obdd-product") {
    return via_obdd(obdd_ensemble_product(ensemble_of(model, ModelKind::obdd, route), options.cap_nodes), q);
  }
  if (route == "branching") return via_branching(model, q);
  if (route == "circuit") return via_circuit(model, q, options.guard_features);
  if (route == "brute-force") return via_table(model, q, options.guard_features);
  throw Error(ErrorKind::validation, "unknown route " + route);
}

std::string auto_route(const Model& model, const ExplanationQuery& q, const SolveOptions& options) {
  switch (model.kind()) {
    case ModelKind::dt: return "dt";
    case ModelKind::obdd: return "obdd";
    case ModelKind::ds:
    case ModelKind::dl: return is_card_lcxp(q) ? "branching" : "brute-force";
    case ModelKind::ensemble: break;
  }
  const auto& ensemble = std::get<Ensemble>(model.body);
  switch (model.element_kind()) {
    case ModelKind::dt: return dt_product_bound(ensemble) <= options.cap_nodes ? "dt-product" : "circuit";
    case ModelKind::obdd: return "obdd-product";
    default: return is_card_lcxp(q) ? "branching" : "circuit";
  }
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::validation:
    case ErrorKind::undefined_feature:
    case ErrorKind::even_ensemble:
    case ErrorKind::not_ordered:
    case ErrorKind::shared_feature: return true;
    default: return false;
  }
}

int report_error(std::ostream& err, std::string_view kind, const std::string& message, int code) {
  err << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
  return code;
}

}  // namespace

SolveResult solve(const Model& model, const ExplanationQuery& q, const SolveOptions& options) {
  if (options.route != "auto") return {run_route(options.route, model, q, options), options.route};
  const std::string route = auto_route(model, q, options);
  if (route == "obdd-product") {
    try {
      return {run_route(route, model, q, options), route};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::not_ordered && e.kind() != ErrorKind::budget_exceeded) throw;
    }
    return {run_route("circuit", model, q, options), "circuit"};
  }
  return {run_route(route, model, q, options), route};
}

Json parameters_to_json(const Parameters& p) {
  auto optional = [](const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); };
  return {{"ens_size", p.ens_size},           {"mnl_size", optional(p.mnl_size)},
          {"terms_elem", optional(p.terms_elem)}, {"term_size", optional(p.term_size)},
          {"width_elem", optional(p.width_elem)}, {"size_elem", p.size_elem},
          {"xp_size", optional(p.xp_size)}};
}

Json read_json_arg(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return parse_json_text(text);
  std::ifstream in(text);
  if (!in) throw Error(ErrorKind::parse, "cannot read " + text);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str());
}

namespace {

// ---------------------------------------------------------------------------
// Subcommands

struct Common {
  std::string model;
  std::string query;
  SolveOptions solve;
};

void add_common(CLI::App* app, Common& common) {
  app->add_option("--model", common.model, "model file")->required();
  app->add_option("--query", common.query, "query as inline JSON or a file")->required();
  app->add_option("--route", common.solve.route, "auto, dt, obdd, dt-product, obdd-product, branching, circuit, brute-force");
  app->add_option("--cap-nodes", common.solve.cap_nodes, "node cap for product constructions");
  app->add_option("--guard-features", common.solve.guard_features, "feature limit for truth tables");
}

int cmd_explain(const Common& common, std::ostream& out) {
  const Model model = load_model(common.model);
  const ExplanationQuery q = query_from_json(read_json_arg(common.query), model.features);
  const SolveResult result = solve(model, q, common.solve);
  Parameters p = measure_parameters(model);
  Json json{{"algorithm", result.route}, {"query", query_to_json(q, model.features)}};
  if (result.witness) {
    p.xp_size = result.witness->size();
    json["witness"] = witness_to_json(*result.witness, model.features);
    json["size"] = result.witness->size();
  } else {
    json["witness"] = nullptr;
    json["size"] = nullptr;
    json["result"] = "no witness";
  }
  json["parameters"] = parameters_to_json(p);
  out << canonical_dump(json);
  return result.witness ? kExitOk : kExitNo;
}

std::function<bool(const Witness&)> validity_check(const Model& model, const ExplanationQuery& q,
                                                   const SolveOptions& options) {
  switch (model.kind()) {
    case ModelKind::dt: {
      const auto& tree = std::get<DecisionTree>(model.body);
      return [&tree, q](const Witness& w) { return dt_check(tree, q, w); };
    }
    case ModelKind::obdd: {
      const auto& obdd = std::get<Obdd>(model.body);
      return [&obdd, q](const Witness& w) { return obdd_check(obdd, q, w); };
    }
    case ModelKind::ensemble: {
      const auto& ensemble = std::get<Ensemble>(model.body);
      if (model.element_kind() == ModelKind::dt && dt_product_bound(ensemble) <= options.cap_nodes) {
        auto tree = std::make_shared<DecisionTree>(dt_ensemble_to_dt(ensemble, options.cap_nodes));
        return [tree, q](const Witness& w) { return dt_check(*tree, q, w); };
      }
      if (model.element_kind() == ModelKind::obdd) {
        try {
          auto obdd = std::make_shared<Obdd>(obdd_ensemble_product(ensemble, options.cap_nodes));
          return [obdd, q](const Witness& w) { return obdd_check(*obdd, q, w); };
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::not_ordered && e.kind() != ErrorKind::budget_exceeded) throw;
        }
      }
      break;
    }
    default: break;
  }
  auto table = std::make_shared<TableExplainer>(model_truth_table(model, options.guard_features));
  return [table, q](const Witness& w) { return table->holds(q, w); };
}

int cmd_verify(const Common& common, const std::string& witness_text, bool minimal, std::ostream& out) {
  const Model model = load_model(common.model);
  const ExplanationQuery q = query_from_json(read_json_arg(common.query), model.features);
  Json json = read_json_arg(witness_text);
  if (json.is_object() && json.contains("witness")) json = json.at("witness");
  if (json.is_null()) {
    out << canonical_dump(Json{{"valid", false}, {"reason", "no witness"}});
    return kExitNo;
  }
  const Witness w = witness_from_json(json, model.features, q.local());
  const auto valid = validity_check(model, q, common.solve);
  std::string reason;
  if (q.budget() && w.size() > *q.budget()) {
    reason = "exceeds the budget";
  } else if (!valid(w)) {
    reason = "not an explanation";
  } else if (minimal && !subset_minimal_by(w, valid)) {
    reason = "not subset-minimal";
  }
  Json verdict{{"valid", reason.empty()}};
  if (!reason.empty()) verdict["reason"] = reason;
  out << canonical_dump(verdict);
  return reason.empty() ? kExitOk : kExitNo;
}

// ---------------------------------------------------------------------------
// Generators

MccInstance graph_param(const Json& params) {
  return mcc_from_json(params.contains("graph") ? params.at("graph") : params);
}

Term term_from_json(const Json& json, const FeatureSpace& space) {
  Term term;
  for (const auto& literal : json) {
    term.push_back(Literal{space.at(literal.at(0).get<std::string>()), literal.at(1).get<int>()});
  }
  return normalize_term(std::move(term));
}

std::vector<FeatureId> feature_list(const Json& json, const FeatureSpace& space) {
  std::vector<FeatureId> out;
  for (const auto& name : json) out.push_back(space.at(name.get<std::string>()));
  return out;
}

struct Generated {
  Model model;
  std::optional<ExplanationQuery> query;
};

Generated from_gadget(GadgetInstance instance) { return {std::move(instance.model), std::move(instance.query)}; }

Generated generate(const std::string& name, const Json& params) {
  if (name == "hitting_set") {
    return from_gadget(gen_hitting_set_laxp(params.at("universe").get<std::size_t>(),
                                            params.at("sets").get<std::vector<std::vector<std::size_t>>>(),
                                            params.at("k").get<std::size_t>()));
  }
  if (name == "mcc_gaxp_dt") {
    return from_gadget(gen_mcc_gaxp_dt(graph_param(params), params.value("max_k", kMaxGaxpCliqueSize)));
  }
  if (name == "mcc_dt_ensemble") return from_gadget(gen_mcc_dt_ensemble(graph_param(params)));
  if (name == "mcc_ds") return from_gadget(gen_mcc_ds(graph_param(params)));
  if (name == "mcc_ds_ensemble") return from_gadget(gen_mcc_ds_ensemble(graph_param(params)));
  if (name == "mcc_obdd_maj") return from_gadget(gen_mcc_obdd_maj(graph_param(params)));
  if (name == "maj_hom") {
    const std::string family = params.value("family", "dt");
    HomFamily f = HomFamily::dt;
    if (family == "ds") {
      f = HomFamily::ds;
    } else if (family == "obdd") {
      f = HomFamily::obdd;
    } else if (family != "dt") {
      throw Error(ErrorKind::validation, "unknown family " + family);
    }
    return from_gadget(gen_maj_hom(graph_param(params), f));
  }
  if (name == "taut_ds") {
    Dnf psi;
    psi.variables = params.at("variables").get<std::vector<std::string>>();
    const FeatureSpace space(psi.variables);
    for (const auto& term : params.value("terms", Json::array())) psi.terms.push_back(term_from_json(term, space));
    return from_gadget(gen_taut_ds(psi).instance);
  }
  if (name == "obdd_primitive") {
    std::vector<std::string> names = params.at("features").get<std::vector<std::string>>();
    const std::string kind = params.at("kind").get<std::string>();
    std::optional<FeatureId> special;
    if (params.contains("special")) {
      names.push_back(params.at("special").get<std::string>());
      special = static_cast<FeatureId>(names.size() - 1);
    }
    const FeatureSpace space(names);
    const std::vector<FeatureId> features = feature_list(params.at("features"), space);
    ObddPrimitive p = ObddPrimitive::exactly_one;
    if (kind == "exists") {
      p = ObddPrimitive::exists;
    } else if (kind == "iff_exists") {
      p = ObddPrimitive::iff_exists;
    } else if (kind == "all_equal") {
      p = ObddPrimitive::all_equal;
    } else if (kind != "exactly_one") {
      throw Error(ErrorKind::validation, "unknown primitive " + kind);
    }
    return {Model{space, obdd_primitive(p, features, space.size(), special)}, std::nullopt};
  }
  if (name == "agreement_counter") {
    const FeatureSpace space(params.at("features").get<std::vector<std::string>>());
    const Example e = example_from_json(params.at("example"), space);
    const Obdd counter = obdd_agreement_counter(e, params.at("k").get<std::size_t>(), all_features(space.size()),
                                                params.value("class", 1));
    return {Model{space, counter}, std::nullopt};
  }
  if (name == "laxp_to_gaxp") {
    const Json& source = params.at("model");
    const Model base = source.is_string() ? load_model(source.get<std::string>()) : model_from_json(source);
    if (base.kind() != ModelKind::obdd) throw Error(ErrorKind::validation, "laxp_to_gaxp needs an OBDD model");
    const Example e = example_from_json(params.at("example"), base.features);
    return from_gadget(
        gen_laxp_to_gaxp(std::get<Obdd>(base.body), base.features, e, params.at("k").get<std::size_t>()));
  }
  throw Error(ErrorKind::validation, "unknown gadget " + name);
}

int cmd_generate(const std::string& gadget, const std::string& params_text, const std::string& out_path,
                 std::ostream& out) {
  const Json params = params_text.empty() ? Json::object() : read_json_arg(params_text);
  Generated generated = generate(gadget, params);
  save_model(out_path, generated.model);
  out << canonical_dump(generated.query ? query_to_json(*generated.query, generated.model.features) : Json(nullptr));
  return kExitOk;
}

}  // namespace

}  // namespace xplain::cli

namespace xplain {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Explanations for transparent binary classifiers", "xplain"};
  app.require_subcommand(1);

  Common explain_args;
  CLI::App* explain = app.add_subcommand("explain", "compute a witness for a query");
  add_common(explain, explain_args);

  Common verify_args;
  std::string witness;
  bool minimal = false;
  CLI::App* verify = app.add_subcommand("verify", "check a witness");
  add_common(verify, verify_args);
  verify->add_option("--witness", witness, "witness, or the output of explain")->required();
  verify->add_flag("--minimal", minimal, "also check subset-minimality");

  std::string gadget;
  std::string params;
  std::string out_path;
  CLI::App* gen = app.add_subcommand("generate", "write a reduction instance");
  gen->add_option("gadget", gadget, "gadget name")->required();
  gen->add_option("--params", params, "parameters as inline JSON or a file");
  gen->add_option("--out", out_path, "model file to write")->required();

  BenchOptions bench_options;
  std::string corpus;
  std::size_t budget = 0;
  CLI::App* bench = app.add_subcommand("bench", "run one query over a corpus of models");
  bench->add_option("--corpus", corpus, "directory of model files")->required();
  bench->add_option("--query", bench_options.query, "query as inline JSON or a file")->required();
  CLI::Option* budget_option = bench->add_option("--budget", budget, "overrides the query budget");
  bench->add_option("--timeout-ms", bench_options.timeout_ms, "per-instance time limit");
  bench->add_option("--route", bench_options.solve.route, "route override");
  bench->add_option("--cap-nodes", bench_options.solve.cap_nodes, "node cap for product constructions");
  bench->add_option("--guard-features", bench_options.solve.guard_features, "feature limit for truth tables");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    return report_error(err, "usage", e.what(), kExitInput);
  }

  try {
    if (explain->parsed()) return cmd_explain(explain_args, out);
    if (verify->parsed()) return cmd_verify(verify_args, witness, minimal, out);
    if (gen->parsed()) return cmd_generate(gadget, params, out_path, out);
    bench_options.corpus = corpus;
    if (budget_option->count() > 0) bench_options.budget = budget;
    out << run_bench(bench_options);
    return kExitOk;
  } catch (const Error& e) {
    return report_error(err, error_kind_name(e.kind()), e.what(), is_input_error(e.kind()) ? kExitInput : kExitFailure);
  } catch (const nlohmann::json::exception& e) {
    return report_error(err, "parse", e.what(), kExitInput);
  } catch (const std::exception& e) {
    return report_error(err, "internal", e.what(), kExitFailure);
  }
}

}  // namespace xplain
