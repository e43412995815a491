#include "hosr/classify.hpp"

#include <gtest/gtest.h>

#include <random>

#include "hosr/errors.hpp"
#include "test_support.hpp"

namespace hosr {
namespace {

using namespace hosr::testing;

// Reference layout with two samples per class. Coordinates are dyadic so
// that every centroid and child-node distance is exact and the training
// points farthest from a centroid sit exactly on the fitted threshold.
Dataset doubled_reference() {
  return Dataset({{"a0", "A", {0.0, 0.0}},   {"a1", "A", {0.0, 0.5}},
                  {"b0", "B", {0.0, 4.0}},   {"b1", "B", {0.0, 4.5}},
                  {"c0", "C", {16.0, 16.0}}, {"c1", "C", {16.0, 16.5}},
                  {"d0", "D", {16.0, 20.0}}, {"d1", "D", {16.0, 20.5}}},
                 2);
}

struct Fitted {
  Hierarchy h;
  NodeModelSet m;
};

Fitted fit(const Dataset& train, double percentile = 95.0) {
  auto b = build_hierarchy(compute_class_embeddings(train), {}, ClusteringConfig{});
  auto m = fit_node_models(b.hierarchy, train, percentile);
  return {std::move(b.hierarchy), std::move(m)};
}

// Exhaustive argmax with the documented tie rule.
NodeId argmax_oracle(const EmbeddingVector& x, const Fitted& f, double bonus) {
  NodeId best = -1;
  double best_score = 0.0;
  for (const auto& n : f.h.nodes()) {
    const double s = node_score(x, n.id, f.h, f.m, bonus);
    const bool better = best < 0 || s > best_score ||
                        (s == best_score && n.depth > f.h.node(best).depth);
    if (better) {
      best = n.id;
      best_score = s;
    }
  }
  return best;
}

TEST(NodeScoreTest, FormulaCases) {
  const auto h = reference_tree();
  NodeModelSet m = fit_node_models(h, reference_dataset());
  m.stats.at(kN1) = {kN1, {0.0, 0.0}, 2.0, 0.5, 10};
  // At the centroid: mean / std.
  EXPECT_DOUBLE_EQ(node_score(EmbeddingVector{0.0, 0.0}, kN1, h, m), 4.0);
  EXPECT_DOUBLE_EQ(node_score(EmbeddingVector{0.0, 0.0}, kN1, h, m, 1.5), 4.0 + 1.5);
  // Distance equal to the mean leaves only the depth bonus.
  EXPECT_DOUBLE_EQ(node_score(EmbeddingVector{2.0, 0.0}, kN1, h, m), 0.0);
  EXPECT_DOUBLE_EQ(node_score(EmbeddingVector{2.0, 0.0}, kN1, h, m, 0.25), 0.25);
  // Zero spread falls back to epsilon.
  m.stats.at(kA) = {kA, {0.0, 0.0}, 1.0, 0.0, 3};
  EXPECT_NEAR(node_score(EmbeddingVector{1.001, 0.0}, kA, h, m), -1e6, 1e-3);
  EXPECT_THROW(node_score(EmbeddingVector{1.0}, kA, h, m), std::invalid_argument);
}

TEST(ScoreBasedTest, TrainingCentroidOfLeafMapsToLeaf) {
  const auto f = fit(doubled_reference());
  const auto& a = f.m.stats.at(f.h.leaf_for("A"));
  const auto r = classify_score_based(a.centroid, f.h, f.m);
  EXPECT_EQ(r.predicted_node, f.h.leaf_for("A"));
  EXPECT_EQ(r.predicted_node, argmax_oracle(a.centroid, f, 0.0));
  EXPECT_TRUE(r.is_leaf_prediction);
  EXPECT_EQ(r.path, f.h.path_from_root(r.predicted_node));
}

TEST(ScoreBasedTest, FarEquidistantPointGoesToRoot) {
  const Dataset train({{"a0", "A", {-1.0, 0.1}}, {"a1", "A", {-1.0, -0.1}},
                       {"b0", "B", {1.0, 0.1}},  {"b1", "B", {1.0, -0.1}}},
                      2);
  const auto f = fit(train);
  const EmbeddingVector x{0.0, 1.0};
  const auto r = classify_score_based(x, f.h, f.m);
  EXPECT_EQ(r.predicted_node, f.h.root());
  EXPECT_EQ(r.predicted_node, argmax_oracle(x, f, 0.0));
  EXPECT_FALSE(r.is_leaf_prediction);
  EXPECT_EQ(r.path, (std::vector<NodeId>{f.h.root()}));
}

TEST(ScoreBasedTest, KnownnessIsBestLeafScore) {
  const auto f = fit(doubled_reference());
  const EmbeddingVector x{5.0, 9.0};
  const auto r = classify_score_based(x, f.h, f.m, {ClassifierMode::score_based, 0.5});
  double best = -1e300;
  for (const auto& [label, leaf] : f.h.class_to_leaf()) {
    best = std::max(best, node_score(x, leaf, f.h, f.m, 0.5));
  }
  EXPECT_EQ(r.knownness_score, best);
  EXPECT_THROW(classify_score_based(x, f.h, f.m, {ClassifierMode::score_based, -1.0}),
               std::invalid_argument);
}

TEST(ScoreBasedPropertyTest, PredictionAttainsMaximumScore) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-4.0, 24.0);
  const auto f = fit(doubled_reference());
  for (int trial = 0; trial < 500; ++trial) {
    const EmbeddingVector x{u(rng), u(rng)};
    const double bonus = (trial % 3) * 0.5;
    const auto r = classify_score_based(x, f.h, f.m, {ClassifierMode::score_based, bonus});
    ASSERT_EQ(r.predicted_node, argmax_oracle(x, f, bonus));
    const double s = node_score(x, r.predicted_node, f.h, f.m, bonus);
    for (const auto& n : f.h.nodes()) ASSERT_GE(s, node_score(x, n.id, f.h, f.m, bonus));
  }
}

TEST(TraversalTest, TrainingPointDescendsToItsLeaf) {
  const auto train = doubled_reference();
  const auto f = fit(train);
  for (const auto& s : train.samples()) {
    const auto r = classify_traversal(s.embedding, f.h, f.m);
    EXPECT_EQ(r.predicted_node, f.h.leaf_for(s.class_label)) << s.sample_id;
    EXPECT_TRUE(r.is_leaf_prediction);
    EXPECT_GE(r.knownness_score, 0.0);
    ASSERT_TRUE(r.root_check.has_value());
  }
  const auto r = classify_traversal(EmbeddingVector{0.0, 0.0}, f.h, f.m);
  ASSERT_EQ(r.steps.size(), 2u);
  EXPECT_EQ(r.steps[0].node, f.h.root());
  EXPECT_TRUE(r.steps[0].left.inlier);
  EXPECT_FALSE(r.steps[0].right.inlier);
  EXPECT_FALSE(r.steps[0].choice.has_value());
}

TEST(TraversalTest, BothChildrenRejectStopsAtRoot) {
  const auto f = fit(doubled_reference());
  const EmbeddingVector x{-20.0, 5.0};
  const auto r = classify_traversal(x, f.h, f.m);
  EXPECT_EQ(r.predicted_node, f.h.root());
  EXPECT_EQ(r.path, (std::vector<NodeId>{f.h.root()}));
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_FALSE(r.steps[0].left.inlier);
  EXPECT_FALSE(r.steps[0].right.inlier);
  EXPECT_DOUBLE_EQ(r.knownness_score,
                   std::max(r.steps[0].left.margin, r.steps[0].right.margin));
  EXPECT_LT(r.knownness_score, 0.0);
  // Root detector verdict is recorded but does not block.
  EXPECT_FALSE(r.root_check->inlier);
}

TEST(TraversalTest, DoubleAcceptanceUsesChildClassifier) {
  // Generous thresholds at 100th percentile on wide classes make both
  // children of the root accept a point between them.
  const Dataset train({{"a0", "A", {0.0, 0.0}}, {"a1", "A", {0.0, 4.0}},
                       {"b0", "B", {3.0, 0.0}}, {"b1", "B", {3.0, 4.0}},
                       {"c0", "C", {20.0, 0.0}}},
                      2);
  const auto f = fit(train, 100.0);
  const EmbeddingVector x{1.4, 2.0};
  const auto r = classify_traversal(x, f.h, f.m);
  bool saw_choice = false;
  for (const auto& st : r.steps) {
    if (st.left.inlier && st.right.inlier) {
      ASSERT_TRUE(st.choice.has_value());
      EXPECT_EQ(st.choice->side, pick_child(f.m.classifiers.at(st.node), x).side);
      saw_choice = true;
    }
  }
  EXPECT_TRUE(saw_choice);
  EXPECT_EQ(r.predicted_node, f.h.leaf_for("A"));
}

TEST(TraversalPropertyTest, PathIsJustifiedByRecordedSteps) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-4.0, 24.0);
  const auto f = fit(doubled_reference());
  for (int trial = 0; trial < 500; ++trial) {
    const EmbeddingVector x{u(rng), u(rng)};
    const auto r = classify_traversal(x, f.h, f.m);
    ASSERT_EQ(r.path.front(), f.h.root());
    ASSERT_EQ(r.path.back(), r.predicted_node);
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
      const auto& st = r.steps[i];
      ASSERT_EQ(st.node, r.path[i]);
      const auto& node = f.h.node(st.node);
      NodeId expected = st.node;
      if (st.left.inlier && st.right.inlier) {
        expected = st.choice->side == ChildSide::left ? node.left() : node.right();
      } else if (st.left.inlier) {
        expected = node.left();
      } else if (st.right.inlier) {
        expected = node.right();
      }
      if (expected == st.node) {
        ASSERT_EQ(i + 1, r.steps.size());
        ASSERT_EQ(r.predicted_node, st.node);
      } else {
        ASSERT_EQ(r.path.at(i + 1), expected);
      }
    }
    ASSERT_EQ(r.is_leaf_prediction, f.h.node(r.predicted_node).is_leaf());
  }
}

TEST(ClassifyTest, UnfittedModelsAreInvalidState) {
  const auto h = reference_tree();
  NodeModelSet empty;
  const EmbeddingVector x{0.0, 0.0};
  EXPECT_THROW(classify_score_based(x, h, empty), InvalidStateError);
  EXPECT_THROW(classify_traversal(x, h, empty), InvalidStateError);
  auto partial = fit_node_models(h, reference_dataset());
  partial.classifiers.erase(kR);
  EXPECT_THROW(classify_traversal(x, h, partial), InvalidStateError);
}

TEST(ClassifyTest, DimensionMismatch) {
  const auto f = fit(doubled_reference());
  EXPECT_THROW(classify_score_based(EmbeddingVector{1.0, 2.0, 3.0}, f.h, f.m),
               std::invalid_argument);
  EXPECT_THROW(classify_traversal(EmbeddingVector{1.0}, f.h, f.m), std::invalid_argument);
}

TEST(ClassifyBatchTest, MatchesSingleCalls) {
  const auto f = fit(doubled_reference());
  EXPECT_TRUE(classify_batch({}, f.h, f.m, {}).empty());

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-4.0, 24.0);
  std::vector<LabeledSample> batch;
  for (int i = 0; i < 40; ++i) {
    batch.push_back({"q" + std::to_string(i), i % 2 ? "A" : "X", {u(rng), u(rng)}});
  }
  for (auto mode : {ClassifierMode::score_based, ClassifierMode::traversal_based}) {
    const ClassifierConfig cfg{mode, 0.0};
    const auto one = classify_batch(std::span(batch).first(1), f.h, f.m, cfg);
    ASSERT_EQ(one.size(), 1u);
    const auto all = classify_batch(batch, f.h, f.m, cfg);
    ASSERT_EQ(all.size(), batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto single = classify(batch[i].embedding, f.h, f.m, cfg);
      EXPECT_EQ(all[i].sample_id, batch[i].sample_id);
      EXPECT_EQ(all[i].true_label, batch[i].class_label);
      EXPECT_EQ(all[i].predicted_node, single.predicted_node);
      EXPECT_EQ(all[i].path, single.path);
      EXPECT_EQ(all[i].knownness_score, single.knownness_score);
    }
  }
}

TEST(ClassifyBatchTest, ErrorsNameTheSample) {
  const auto f = fit(doubled_reference());
  const std::vector<LabeledSample> bad{{"ok", "A", {0.0, 0.0}}, {"broken", "A", {1.0}}};
  try {
    classify_batch(bad, f.h, f.m, {});
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

TEST(ClassifyPropertyTest, RigidTranslationPreservesPredictions) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-4.0, 24.0);
  const auto train = doubled_reference();
  const EmbeddingVector shift{123.25, -47.5};
  std::vector<LabeledSample> moved;
  for (auto s : train.samples()) {
    s.embedding[0] += shift[0];
    s.embedding[1] += shift[1];
    moved.push_back(s);
  }
  const auto f = fit(train);
  const auto g = fit(Dataset(moved, 2));
  for (int trial = 0; trial < 300; ++trial) {
    const EmbeddingVector x{u(rng), u(rng)};
    const EmbeddingVector y{x[0] + shift[0], x[1] + shift[1]};
    for (auto mode : {ClassifierMode::score_based, ClassifierMode::traversal_based}) {
      const ClassifierConfig cfg{mode, 0.0};
      EXPECT_EQ(classify(x, f.h, f.m, cfg).predicted_node, classify(y, g.h, g.m, cfg).predicted_node);
    }
  }
}

TEST(ClassifyTest, Deterministic) {
  const auto f = fit(doubled_reference());
  const EmbeddingVector x{4.5, 11.0};
  for (auto mode : {ClassifierMode::score_based, ClassifierMode::traversal_based}) {
    const auto a = classify(x, f.h, f.m, {mode, 0.3});
    const auto b = classify(x, f.h, f.m, {mode, 0.3});
    EXPECT_EQ(a.predicted_node, b.predicted_node);
    EXPECT_EQ(a.knownness_score, b.knownness_score);
  }
  EXPECT_EQ(parse_classifier_mode("score"), ClassifierMode::score_based);
  EXPECT_EQ(parse_classifier_mode("traversal_based"), ClassifierMode::traversal_based);
  EXPECT_THROW(parse_classifier_mode("nope"), std::invalid_argument);
}

}  // namespace
}  // namespace hosr
