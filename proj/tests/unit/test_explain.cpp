#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "xplain/error.hpp"
#include "xplain/explain.hpp"

namespace xplain {
namespace {

using namespace testing;

PartialExample assign(std::size_t n, std::initializer_list<std::pair<FeatureId, int>> values) {
  PartialExample tau(n);
  for (const auto& [f, v] : values) tau.set(f, v);
  return tau;
}

TEST(IsExplanation, RunningExample) {
  const Model m = running_model();
  const Example e = running_example();
  EXPECT_TRUE(is_explanation(m, ExplanationQuery::local(XpKind::lAXp, e), Witness(FeatureSet{1, 2})));
  EXPECT_TRUE(is_explanation(m, ExplanationQuery::global(XpKind::gAXp, 0), Witness(assign(3, {{0, 1}, {1, 1}}))));
  EXPECT_TRUE(is_explanation(m, ExplanationQuery::global(XpKind::gCXp, 0), Witness(assign(3, {{0, 0}, {2, 0}}))));
  EXPECT_TRUE(is_explanation(m, ExplanationQuery::local(XpKind::lCXp, e), Witness(FeatureSet{1})));
  EXPECT_TRUE(is_explanation(m, ExplanationQuery::local(XpKind::lCXp, e), Witness(FeatureSet{2})));
}

TEST(IsExplanation, EmptyContrastiveSetNeverWorks) {
  Rng rng(1);
  for (int round = 0; round < 20; ++round) {
    const Model m = random_model(rng, ModelKind::dt, 4, false);
    const Example e = random_example(rng, 4);
    EXPECT_FALSE(is_explanation(m, ExplanationQuery::local(XpKind::lCXp, e), Witness(FeatureSet{})));
  }
}

TEST(IsExplanation, GuardRaisesTooLarge) {
  const Model m = single(stump(25, 0));
  try {
    is_explanation(m, ExplanationQuery::local(XpKind::lAXp, Example(25)), Witness(FeatureSet{0}));
    FAIL() << "expected TooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::too_large);
  }
}

TEST(OracleMin, RunningExample) {
  const Model m = running_model();
  const Example e = running_example();
  const auto lcxp = oracle_min(m, ExplanationQuery::local(XpKind::lCXp, e));
  ASSERT_TRUE(lcxp);
  EXPECT_EQ(lcxp->features(), (FeatureSet{1}));
  const auto laxp = oracle_min(m, ExplanationQuery::local(XpKind::lAXp, e, 2));
  ASSERT_TRUE(laxp);
  EXPECT_EQ(laxp->features(), (FeatureSet{1, 2}));
}

TEST(OracleMin, RunningExampleOnlyLaxpOfSizeTwo) {
  const Model m = running_model();
  const ExplanationQuery q = ExplanationQuery::local(XpKind::lAXp, running_example());
  std::vector<FeatureSet> valid;
  for (FeatureSet s : {FeatureSet{}, FeatureSet{0}, FeatureSet{1}, FeatureSet{2}, FeatureSet{0, 1}, FeatureSet{0, 2},
                       FeatureSet{1, 2}}) {
    if (is_explanation(m, q, Witness(s))) valid.push_back(s);
  }
  EXPECT_EQ(valid, (std::vector<FeatureSet>{{1, 2}}));
}

TEST(OracleMin, ConstantModelHasNoGlobalWitnessForOtherClass) {
  const Model m = single(DecisionTree::constant(3, 0));
  EXPECT_FALSE(oracle_min(m, ExplanationQuery::global(XpKind::gAXp, 1)).has_value());
  const auto w = oracle_min(m, ExplanationQuery::global(XpKind::gAXp, 0));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->size(), 0U);
}

TEST(OracleMin, AndTreeLaxp) {
  const auto w = oracle_min(and_tree_model(), ExplanationQuery::local(XpKind::lAXp, Example{1, 1}));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->features(), (FeatureSet{0, 1}));
}

TEST(VerifySubsetMinimal, RunningExample) {
  const Model m = running_model();
  EXPECT_TRUE(verify_subset_minimal(m, ExplanationQuery::local(XpKind::lAXp, running_example()),
                                    Witness(FeatureSet{1, 2})));
  EXPECT_TRUE(verify_subset_minimal(m, ExplanationQuery::global(XpKind::gCXp, 0), Witness(assign(3, {{0, 0}, {2, 0}}))));
  EXPECT_TRUE(verify_subset_minimal(m, ExplanationQuery::global(XpKind::gAXp, 0), Witness(assign(3, {{0, 1}, {1, 1}}))));
  // The full set is an lAXp but not a minimal one.
  EXPECT_FALSE(verify_subset_minimal(m, ExplanationQuery::local(XpKind::lAXp, running_example()),
                                     Witness(FeatureSet{0, 1, 2})));
}

TEST(Properties, MinimumLcxpIsHammingDistance) {
  Rng rng(17);
  for (ModelKind kind : {ModelKind::dt, ModelKind::ds, ModelKind::dl, ModelKind::obdd}) {
    for (int round = 0; round < 15; ++round) {
      const Model m = random_model(rng, kind, 6, round % 2 == 1);
      const Example e = random_example(rng, 6);
      const Label c = classify(m, e);
      std::optional<std::size_t> distance;
      for (const Example& x : all_examples(6)) {
        if (classify(m, x) == c) continue;
        std::size_t d = 0;
        for (FeatureId f = 0; f < 6; ++f) d += x[f] != e[f] ? 1 : 0;
        if (!distance || d < *distance) distance = d;
      }
      const auto w = oracle_min(m, ExplanationQuery::local(XpKind::lCXp, e));
      ASSERT_EQ(w.has_value(), distance.has_value());
      if (w) EXPECT_EQ(w->size(), *distance);
    }
  }
}

TEST(Properties, GlobalDuality) {
  Rng rng(19);
  for (int round = 0; round < 30; ++round) {
    const Model m = random_model(rng, ModelKind::dl, 5, false);
    const TableExplainer table(model_truth_table(m));
    for (int t = 0; t < 20; ++t) {
      const Witness w(random_partial(rng, 5));
      for (Label c : {0, 1}) {
        EXPECT_EQ(table.holds(ExplanationQuery::global(XpKind::gAXp, c), w),
                  table.holds(ExplanationQuery::global(XpKind::gCXp, 1 - c), w));
      }
    }
  }
}

TEST(Properties, MinimumWitnessesAreSubsetMinimal) {
  Rng rng(23);
  for (int round = 0; round < 30; ++round) {
    const Model m = random_model(rng, ModelKind::dt, 5, false);
    const Example e = random_example(rng, 5);
    for (XpKind kind : {XpKind::lAXp, XpKind::lCXp}) {
      const ExplanationQuery q = ExplanationQuery::local(kind, e);
      if (const auto w = oracle_min(m, q)) EXPECT_TRUE(verify_subset_minimal(m, q, *w));
    }
    for (XpKind kind : {XpKind::gAXp, XpKind::gCXp}) {
      for (Label c : {0, 1}) {
        const ExplanationQuery q = ExplanationQuery::global(kind, c);
        if (const auto w = oracle_min(m, q)) EXPECT_TRUE(verify_subset_minimal(m, q, *w));
      }
    }
  }
}

TEST(EnumerateMinimum, OrderIsSizeThenLex) {
  std::vector<FeatureSet> seen;
  enumerate_minimum(true, 3, 2, [&](const Witness& w) {
    seen.push_back(w.features());
    return false;
  });
  EXPECT_EQ(seen, (std::vector<FeatureSet>{{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}));
}

TEST(EnumerateMinimum, GlobalAssignmentsCountWithLowestFeatureMostSignificant) {
  std::vector<PartialExample> seen;
  enumerate_minimum(false, 2, 2, [&](const Witness& w) {
    if (w.size() == 2) seen.push_back(w.assignment());
    return false;
  });
  ASSERT_EQ(seen.size(), 4U);
  EXPECT_EQ(seen[0], assign(2, {{0, 0}, {1, 0}}));
  EXPECT_EQ(seen[1], assign(2, {{0, 0}, {1, 1}}));
  EXPECT_EQ(seen[2], assign(2, {{0, 1}, {1, 0}}));
  EXPECT_EQ(seen[3], assign(2, {{0, 1}, {1, 1}}));
}

}  // namespace
}  // namespace xplain
