#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "xplain/dt.hpp"
#include "xplain/error.hpp"
#include "xplain/gadgets.hpp"
#include "xplain/obdd.hpp"

namespace xplain {
namespace {

using namespace testing;

bool yes(const GadgetInstance& g) {
  const auto w = oracle_min(g.model, g.query);
  return w && w->size() <= *g.query.budget();
}

bool homogeneous(const Model& m) {
  const TruthTable t = model_truth_table(m);
  return !t.any() || t.count() == t.entries();
}

std::size_t element_count(const Model& m) { return std::get<Ensemble>(m.body).elements.size(); }

MccInstance lone_vertex() { return MccInstance::make({0}, 1, {}); }

TEST(DtFromExamples, EmptySetIsAZeroLeaf) {
  const DecisionTree t = dt_from_examples({}, {0, 1}, 2);
  EXPECT_EQ(t.nodes.size(), 1U);
  EXPECT_EQ(t.nodes[t.root].label, 0);
}

TEST(DtFromExamples, SingleExample) {
  const DecisionTree t = dt_from_examples({Example{1, 0}}, {0, 1}, 2);
  EXPECT_LE(leaf_count(t), 5U);
  for (const Example& e : all_examples(2)) EXPECT_EQ(classify(t, e), (e == Example{1, 0}) ? 1 : 0);
}

TEST(DtFromExamples, MembershipOrderedAndStable) {
  Rng rng(101);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<Example> examples;
    for (std::size_t i = 0; i < 1 + rng() % 4; ++i) examples.push_back(random_example(rng, n));
    const DecisionTree t = dt_from_examples(examples, all_features(n), n);
    EXPECT_LE(leaf_count(t), 2 * examples.size() * n + 1);
    for (const Example& e : all_examples(n)) {
      const bool member = std::find(examples.begin(), examples.end(), e) != examples.end();
      EXPECT_EQ(classify(t, e), member ? 1 : 0);
    }
    EXPECT_NO_THROW(dt_to_obdd(t));  // ordered
    const DecisionTree s = simplify_dt(t);
    EXPECT_EQ(s.nodes.size(), t.nodes.size());
  }
}

TEST(HittingSet, Examples) {
  EXPECT_EQ(oracle_min(gen_hitting_set_laxp(2, {{1}, {2}}, 2).model,
                       ExplanationQuery::local(XpKind::lAXp, Example(2)))
                ->size(),
            2U);
  const auto single = oracle_min(gen_hitting_set_laxp(2, {{1}}, 1).model, ExplanationQuery::local(XpKind::lAXp, Example(2)));
  EXPECT_EQ(single->features(), (FeatureSet{0}));
  const auto common =
      oracle_min(gen_hitting_set_laxp(4, {{1, 3}, {2, 3}, {3, 4}}, 1).model, ExplanationQuery::local(XpKind::lAXp, Example(4)));
  EXPECT_EQ(common->features(), (FeatureSet{2}));
  EXPECT_THROW(gen_hitting_set_laxp(2, {}, 1), Error);
}

bool gaxp_yes(const GadgetInstance& g) { return dt_xp_search(std::get<DecisionTree>(g.model.body), g.query).has_value(); }

TEST(MccGaxpDt, TriangleIsYes) {
  const GadgetInstance g = gen_mcc_gaxp_dt(triangle());
  EXPECT_EQ(g.query.kind(), XpKind::gAXp);
  EXPECT_EQ(g.query.target_class(), 0);
  const auto w = dt_xp_search(std::get<DecisionTree>(g.model.body), g.query);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->size(), 3U);
}

TEST(MccGaxpDt, PathIsNo) { EXPECT_FALSE(gaxp_yes(gen_mcc_gaxp_dt(path3()))); }

TEST(MccGaxpDt, SingleEdgeIsYes) {
  const GadgetInstance g = gen_mcc_gaxp_dt(single_edge());
  const auto w = dt_xp_search(std::get<DecisionTree>(g.model.body), g.query);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->size(), 2U);
  EXPECT_FALSE(gaxp_yes(gen_mcc_gaxp_dt(MccInstance::make({0, 1}, 2, {}))));
}

TEST(MccGaxpDt, CapOnCliqueSize) {
  try {
    gen_mcc_gaxp_dt(triangle(), 2);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
  }
}

TEST(MccDtEnsemble, Examples) {
  const GadgetInstance k3 = gen_mcc_dt_ensemble(triangle());
  EXPECT_EQ(element_count(k3.model), 11U);
  EXPECT_FALSE(homogeneous(k3.model));
  EXPECT_TRUE(yes(k3));
  const GadgetInstance path = gen_mcc_dt_ensemble(path3());
  EXPECT_TRUE(homogeneous(path.model));
  const GadgetInstance edge = gen_mcc_dt_ensemble(single_edge());
  EXPECT_EQ(element_count(edge.model), 5U);
  EXPECT_FALSE(homogeneous(edge.model));
}

TEST(MajHom, Examples) {
  const GadgetInstance path = gen_maj_hom(path3(), HomFamily::dt);
  EXPECT_EQ(element_count(path.model), 7U);
  EXPECT_TRUE(homogeneous(path.model));
  EXPECT_FALSE(yes(path));
  const GadgetInstance k3 = gen_maj_hom(triangle(), HomFamily::dt);
  EXPECT_EQ(element_count(k3.model), 5U);
  EXPECT_FALSE(homogeneous(k3.model));
  EXPECT_TRUE(yes(k3));
  EXPECT_EQ(classify(k3.model, Example{1, 1, 1}), 1);
}

TEST(MajHom, ElementCount) {
  Rng rng(102);
  for (int round = 0; round < 40; ++round) {
    const MccInstance g = random_mcc(rng, 1 + round % 4, 7);
    const std::size_t n = g.size();
    const std::size_t non_edges = n * (n - 1) / 2 - g.edges.size();
    const long long padding =
        static_cast<long long>(non_edges) - static_cast<long long>(n) + 2 * static_cast<long long>(g.k) - 1;
    const std::size_t expected = non_edges + n + static_cast<std::size_t>(padding < 0 ? -padding : padding);
    const Model m = gen_maj_hom(g, HomFamily::dt).model;
    EXPECT_EQ(element_count(m), expected);
    EXPECT_EQ(element_count(m) % 2, 1U);
  }
}

TEST(MajHom, PaddingKeepsEquivalence) {
  for (const MccInstance& g : {triangle(), path3(), single_edge(), lone_vertex()}) {
    for (HomFamily family : {HomFamily::dt, HomFamily::ds, HomFamily::obdd}) {
      const GadgetInstance inst = gen_maj_hom(g, family);
      EXPECT_EQ(yes(inst), has_multicolored_clique(g));
    }
  }
}

TEST(MajHom, FamiliesClassifyIdentically) {
  Rng rng(103);
  for (int round = 0; round < 30; ++round) {
    const MccInstance g = random_mcc(rng, 2 + round % 2, 6);
    const Model dt = gen_maj_hom(g, HomFamily::dt).model;
    const Model ds = gen_maj_hom(g, HomFamily::ds).model;
    const Model obdd = gen_maj_hom(g, HomFamily::obdd).model;
    EXPECT_EQ(model_truth_table(dt), model_truth_table(ds));
    EXPECT_EQ(model_truth_table(dt), model_truth_table(obdd));
  }
}

TEST(TautDs, Examples) {
  Dnf taut{{"x"}, {Term{Literal{0, 0}}, Term{Literal{0, 1}}}};
  const TautInstance t = gen_taut_ds(taut);
  EXPECT_FALSE(t.trivial_no);
  EXPECT_TRUE(homogeneous(t.instance.model));

  Dnf not_taut{{"x", "y"}, {Term{Literal{0, 0}, Literal{1, 0}}}};
  const TautInstance n = gen_taut_ds(not_taut);
  EXPECT_FALSE(n.trivial_no);
  EXPECT_FALSE(homogeneous(n.instance.model));

  Dnf empty{{"x", "y"}, {}};
  const TautInstance e = gen_taut_ds(empty);
  EXPECT_TRUE(e.trivial_no);
  EXPECT_TRUE(homogeneous(e.instance.model));
  EXPECT_EQ(classify(e.instance.model, Example{1, 1}), 0);
}

TEST(TautDs, TautologyIffHomogeneous) {
  Rng rng(107);
  for (int round = 0; round < 60; ++round) {
    const DecisionSet s = random_ds(rng, 4, 6, 3);
    Dnf psi{{"a", "b", "c", "d"}, s.terms};
    const TautInstance t = gen_taut_ds(psi);
    bool tautology = true;
    for (const Example& e : all_examples(4)) {
      bool sat = false;
      for (const Term& term : s.terms) sat = sat || satisfies(e, term);
      tautology = tautology && sat;
    }
    if (!t.trivial_no) EXPECT_EQ(tautology, homogeneous(t.instance.model));
  }
}

TEST(MccDs, Examples) {
  EXPECT_TRUE(yes(gen_mcc_ds(triangle())));
  EXPECT_FALSE(yes(gen_mcc_ds(path3())));
  const GadgetInstance one = gen_mcc_ds(lone_vertex());
  const auto w = oracle_min(one.model, one.query);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->size(), 1U);
}

TEST(MccDsEnsemble, Examples) {
  const GadgetInstance k3 = gen_mcc_ds_ensemble(triangle());
  EXPECT_EQ(element_count(k3.model), 7U);
  EXPECT_TRUE(yes(k3));
  EXPECT_LE(*measure_parameters(k3.model).term_size, 2U);
  EXPECT_FALSE(yes(gen_mcc_ds_ensemble(path3())));
  const GadgetInstance one = gen_mcc_ds_ensemble(lone_vertex());
  EXPECT_EQ(element_count(one.model), 3U);
  EXPECT_TRUE(yes(one));
}

TEST(Mcc, JsonRoundTripAndValidation) {
  const MccInstance g = triangle();
  const MccInstance back = mcc_from_json(mcc_to_json(g));
  EXPECT_EQ(back.names, g.names);
  EXPECT_EQ(back.edges, g.edges);
  EXPECT_EQ(back.k, 3U);
  EXPECT_THROW(mcc_from_json(nlohmann::json::parse(R"({"parts":[["a","b"]],"edges":[["a","b"]]})")), Error);
  EXPECT_THROW(mcc_from_json(nlohmann::json::parse(R"({"parts":[["a"],["b"]],"edges":[["a","c"]]})")), Error);
  EXPECT_TRUE(has_multicolored_clique(triangle()));
  EXPECT_FALSE(has_multicolored_clique(path3()));
}

}  // namespace
}  // namespace xplain
