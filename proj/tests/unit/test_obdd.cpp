#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "xplain/error.hpp"
#include "xplain/gadgets.hpp"
#include "xplain/obdd.hpp"

namespace xplain {
namespace {

using namespace testing;

PartialExample assign(std::size_t n, std::initializer_list<std::pair<FeatureId, int>> values) {
  PartialExample tau(n);
  for (const auto& [f, v] : values) tau.set(f, v);
  return tau;
}

TEST(ObddCheck, XorObdd) {
  const Obdd o = xor_obdd();
  const ExplanationQuery q = ExplanationQuery::local(XpKind::lAXp, Example{0, 0});
  EXPECT_TRUE(obdd_check(o, q, Witness(FeatureSet{0, 1})));
  EXPECT_FALSE(obdd_check(o, q, Witness(FeatureSet{0})));
  EXPECT_FALSE(obdd_check(o, ExplanationQuery::global(XpKind::gCXp, 1), Witness(PartialExample(2))));
  EXPECT_TRUE(obdd_check(Obdd::constant(2, 0), ExplanationQuery::global(XpKind::gCXp, 1), Witness(PartialExample(2))));
}

TEST(ObddCheck, MatchesDefinition) {
  Rng rng(51);
  for (int round = 0; round < 60; ++round) {
    const Obdd o = random_complete_obdd(rng, 6, 4);
    const Model m = single(o);
    const Example e = random_example(rng, 6);
    for (int trial = 0; trial < 10; ++trial) {
      const PartialExample tau = random_partial(rng, 6);
      for (XpKind kind : {XpKind::lAXp, XpKind::lCXp}) {
        const ExplanationQuery q = ExplanationQuery::local(kind, e);
        EXPECT_EQ(obdd_check(o, q, Witness(tau.domain())), is_explanation(m, q, Witness(tau.domain())));
      }
      for (XpKind kind : {XpKind::gAXp, XpKind::gCXp}) {
        for (Label c : {0, 1}) {
          const ExplanationQuery q = ExplanationQuery::global(kind, c);
          EXPECT_EQ(obdd_check(o, q, Witness(tau)), is_explanation(m, q, Witness(tau)));
        }
      }
    }
  }
}

TEST(ObddSubsetMin, Examples) {
  const Obdd o = xor_obdd();
  EXPECT_EQ(obdd_subset_min(o, ExplanationQuery::global(XpKind::gAXp, 1))->size(), 2U);
  EXPECT_EQ(obdd_subset_min(o, ExplanationQuery::local(XpKind::lAXp, Example{0, 0}))->features(), (FeatureSet{0, 1}));
  EXPECT_EQ(obdd_subset_min(single_node_obdd(1, 0), ExplanationQuery::global(XpKind::gAXp, 1))->assignment(),
            assign(1, {{0, 1}}));
  EXPECT_FALSE(obdd_subset_min(Obdd::constant(2, 0), ExplanationQuery::global(XpKind::gAXp, 1)).has_value());
}

TEST(ObddMinLcxp, Examples) {
  EXPECT_EQ(obdd_min_lcxp(xor_obdd(), Example{0, 0}).size(), 1U);
  EXPECT_EQ(obdd_min_lcxp(and_obdd(), Example{0, 0}).features(), (FeatureSet{0, 1}));
  try {
    obdd_min_lcxp(Obdd::constant(2, 1), Example{0, 0});
    FAIL() << "expected Homogeneous";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::homogeneous);
  }
}

TEST(ObddXpSearch, Examples) {
  const Obdd o = xor_obdd();
  EXPECT_FALSE(obdd_xp_search(o, ExplanationQuery::local(XpKind::lAXp, Example{0, 0}, 1)).has_value());
  EXPECT_EQ(obdd_xp_search(o, ExplanationQuery::global(XpKind::gAXp, 0, 2))->assignment(),
            assign(2, {{0, 0}, {1, 0}}));
  EXPECT_FALSE(obdd_xp_search(o, ExplanationQuery::local(XpKind::lAXp, Example{0, 0}, 0)).has_value());
  EXPECT_EQ(obdd_xp_search(Obdd::constant(2, 1), ExplanationQuery::local(XpKind::lAXp, Example{0, 0}, 0))->size(), 0U);
}

TEST(ObddAlgorithms, AgreeWithOracle) {
  Rng rng(53);
  for (int round = 0; round < 80; ++round) {
    const std::size_t n = 1 + rng() % 7;
    const Obdd o = random_complete_obdd(rng, n, 4);
    const Model m = single(o);
    const Example e = random_example(rng, n);
    for (XpKind kind : {XpKind::lAXp, XpKind::lCXp, XpKind::gAXp, XpKind::gCXp}) {
      for (Label c : {0, 1}) {
        const ExplanationQuery q = is_local(kind) ? ExplanationQuery::local(kind, e) : ExplanationQuery::global(kind, c);
        const auto oracle = oracle_min(m, q);
        if (kind == XpKind::lCXp) {
          if (oracle) {
            const Witness w = obdd_min_lcxp(o, e);
            EXPECT_EQ(w, *oracle);  // both lex-least among minimum sets
          } else {
            EXPECT_THROW(obdd_min_lcxp(o, e), Error);
          }
        } else {
          const auto subset = obdd_subset_min(o, q);
          ASSERT_EQ(subset.has_value(), oracle.has_value());
          if (subset) EXPECT_TRUE(verify_subset_minimal(m, q, *subset));
        }
        const auto search = obdd_xp_search(o, q.with_budget(n));
        ASSERT_EQ(search.has_value(), oracle.has_value());
        if (search) EXPECT_EQ(*search, *oracle);
        if (is_local(kind)) break;
      }
    }
  }
}

TEST(ObddProduct, MajorityOfSingleNodes) {
  Ensemble ens;
  ens.num_features = 3;
  ens.elements = {single_node_obdd(3, 0), single_node_obdd(3, 1), single_node_obdd(3, 2)};
  ens.shared_order = std::vector<FeatureId>{0, 1, 2};
  const Obdd p = obdd_ensemble_product(ens);
  EXPECT_TRUE(is_complete(p));
  for (const Example& e : all_examples(3)) EXPECT_EQ(classify(p, e), classify(ens, e));
}

TEST(ObddProduct, SingletonIsIsomorphic) {
  Ensemble ens;
  ens.num_features = 2;
  ens.elements = {xor_obdd()};
  const Obdd p = obdd_ensemble_product(ens);
  EXPECT_EQ(obdd_size(p), obdd_size(xor_obdd()));
}

TEST(ObddProduct, SizeBound) {
  Rng rng(57);
  for (int round = 0; round < 40; ++round) {
    const Model m = random_model(rng, ModelKind::obdd, 6, true);
    const auto& ens = std::get<Ensemble>(m.body);
    const Obdd p = obdd_ensemble_product(ens);
    EXPECT_LE(obdd_size(p), obdd_product_bound(ens));
    for (const Example& e : all_examples(6)) EXPECT_EQ(classify(p, e), classify(ens, e));
  }
}

TEST(ObddProduct, NodeCap) {
  Rng rng(59);
  const Model m = random_model(rng, ModelKind::obdd, 6, true);
  try {
    obdd_ensemble_product(std::get<Ensemble>(m.body), 3);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
  }
}

TEST(DtToObdd, AndTree) {
  const Obdd o = dt_to_obdd(and_tree());
  EXPECT_TRUE(is_complete(o));
  EXPECT_EQ(o.order, (std::vector<FeatureId>{0, 1}));
  for (const Example& e : all_examples(2)) EXPECT_EQ(classify(o, e), classify(and_tree(), e));
}

TEST(DtToObdd, ConstantTree) {
  const Obdd o = dt_to_obdd(DecisionTree::constant(2, 1));
  EXPECT_EQ(o.source, Obdd::kTrue);
}

TEST(DtToObdd, TreeFromExamples) {
  const DecisionTree t = dt_from_examples({Example{1, 0, 1}, Example{0, 1, 1}}, {0, 1, 2}, 3);
  const Obdd o = dt_to_obdd(t);
  for (const Example& e : all_examples(3)) EXPECT_EQ(classify(o, e), classify(t, e));
}

TEST(DtToObdd, UnorderedTreeRaisesNotOrdered) {
  // f1 before f2 below one child of the root, f2 before f1 below the other.
  DecisionTree u;
  u.num_features = 3;
  const auto z = u.add_leaf(0);
  const auto o1 = u.add_leaf(1);
  const auto x = u.add_node(1, z, o1);   // f2
  const auto y = u.add_node(0, z, o1);   // f1
  const auto p = u.add_node(0, x, z);    // f1 then f2
  const auto q = u.add_node(1, y, o1);   // f2 then f1
  u.root = u.add_node(2, p, q);
  try {
    dt_to_obdd(u);
    FAIL() << "expected NotOrdered";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_ordered);
  }
}

TEST(DtToObdd, ObddAlgorithmsReproduceDtSizes) {
  Rng rng(61);
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    const DecisionTree t = random_dt(rng, 5, 10);
    Obdd o;
    try {
      o = dt_to_obdd(t);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    const Example e = random_example(rng, 5);
    const ExplanationQuery q = ExplanationQuery::local(XpKind::lAXp, e, 5);
    EXPECT_EQ(obdd_xp_search(o, q)->size(), dt_xp_search(t, q)->size());
    try {
      EXPECT_EQ(obdd_min_lcxp(o, e).size(), dt_min_lcxp(t, e).size());
    } catch (const Error& err) {
      EXPECT_EQ(err.kind(), ErrorKind::homogeneous);
    }
  }
  EXPECT_GT(checked, 10);
}

}  // namespace
}  // namespace xplain
