#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hosr/classify.hpp"
#include "hosr/hierarchy.hpp"

namespace hosr {

enum class UtilityMode {
  /// Predictions off the true leaf's root path score 0.
  ancestor_only,
  /// depth(prediction) / depth(true leaf) for every prediction.
  literal,
};

/// Mean ratio of predicted depth to true-leaf depth over known-class results.
/// Throws std::invalid_argument for empty input, a missing or unknown true
/// label, or a true leaf at depth 0.
double utility(std::span<const ClassificationResult> results, const Hierarchy& h,
               UtilityMode mode = UtilityMode::ancestor_only);

/// Share of one class's predictions landing on each node.
struct AssignmentDistribution {
  ClassLabel class_label;
  std::map<NodeId, double> proportions;
};

/// Throws std::invalid_argument when no result carries `label`.
AssignmentDistribution assignment_distribution(std::span<const ClassificationResult> results,
                                               const ClassLabel& label);

/// CC(t, k) = 1 - sum_t' d(t, t') / d_max(t) * P(t', k); 1 when d_max(t) = 0.
double concentration_centrality(NodeId t, const AssignmentDistribution& dist,
                                const Hierarchy& h);
double concentration_centrality(std::size_t t, const AssignmentDistribution& dist,
                                const TreeDistances& d);

struct ConcentrationCenter {
  NodeId best_node = 0;
  double ccc = 0.0;
};

/// Argmax of CC over all nodes, lowest id on ties (within 1e-12).
ConcentrationCenter class_concentration_centrality(const AssignmentDistribution& dist,
                                                   const Hierarchy& h);
ConcentrationCenter class_concentration_centrality(const AssignmentDistribution& dist,
                                                   const TreeDistances& d);

/// Per-class CCC over results whose true label is not a class of `h`.
std::map<ClassLabel, ConcentrationCenter> per_class_ccc(
    std::span<const ClassificationResult> results, const Hierarchy& h);

/// Unweighted mean CCC over the unseen classes present in `results`.
/// Throws std::invalid_argument when no unseen class is present.
double mean_ccc(std::span<const ClassificationResult> results, const Hierarchy& h);

/// Classical closeness centrality: 1 / sum of distances to every other node.
/// 0 for a single-node graph.
double closeness_centrality(std::size_t t, const TreeDistances& d);

struct ScoredLabel {
  double score = 0.0;
  bool is_known = false;
};

/// P(score of a random known > score of a random unknown), ties counting 1/2.
/// Throws std::invalid_argument unless both labels are present.
double roc_auc(std::span<const ScoredLabel> samples);

struct RocPoint {
  double threshold = 0.0;
  /// Known samples with score >= threshold.
  double tpr = 0.0;
  /// Unknown samples with score >= threshold.
  double fpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// One point per distinct score, descending, preceded by (+inf, 0, 0).
std::vector<RocPoint> roc_curve(std::span<const ScoredLabel> samples);

/// Threshold maximising tpr - fpr (first such point on the curve).
RocPoint youden_optimal(std::span<const RocPoint> curve);

struct DetectionCounts {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  std::size_t true_negative = 0;

  friend bool operator==(const DetectionCounts&, const DetectionCounts&) = default;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Zero precision with no predicted positives, zero F1 when P + R = 0.
PrecisionRecall precision_recall_f1(const DetectionCounts& counts);

/// Positive = unseen class. A result is predicted positive when its node is
/// internal. Results without a true label are skipped.
DetectionCounts unknown_detection_counts(std::span<const ClassificationResult> results,
                                         const Hierarchy& h);

/// Same positives, but predicted positive when knownness < threshold.
DetectionCounts unknown_detection_counts_at(std::span<const ClassificationResult> results,
                                            const Hierarchy& h, double threshold);

PrecisionRecall precision_recall_f1(std::span<const ClassificationResult> results,
                                    const Hierarchy& h);

}  // namespace hosr
