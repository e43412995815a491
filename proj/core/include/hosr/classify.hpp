#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hosr/dataset.hpp"
#include "hosr/hierarchy.hpp"
#include "hosr/node_models.hpp"

namespace hosr {

enum class ClassifierMode { score_based, traversal_based };

std::string_view to_string(ClassifierMode m);
/// Accepts "score"/"score_based" and "traversal"/"traversal_based".
ClassifierMode parse_classifier_mode(std::string_view name);

struct ClassifierConfig {
  ClassifierMode mode = ClassifierMode::score_based;
  /// Added per level of depth to node_score. Must be >= 0.
  double depth_bonus = 0.0;
};

/// Outcome of one internal-node step of a traversal.
struct TraversalStep {
  NodeId node = 0;
  InlierDecision left;
  InlierDecision right;
  /// Set only when both children accepted the sample.
  std::optional<ChildChoice> choice;
};

struct ClassificationResult {
  std::string sample_id;
  std::optional<ClassLabel> true_label;
  NodeId predicted_node = 0;
  /// Root first, predicted node last.
  std::vector<NodeId> path;
  /// Higher means more likely to be a known class.
  double knownness_score = 0.0;
  bool is_leaf_prediction = false;

  /// Traversal mode only: the root detector's verdict, which never blocks.
  std::optional<InlierDecision> root_check;
  /// Traversal mode only: one entry per internal node visited.
  std::vector<TraversalStep> steps;
};

/// Standardized fit of `x` to node `t`:
/// -(|x - centroid| - mean_dist) / max(std_dist, epsilon) + depth_bonus * depth.
double node_score(std::span<const double> x, NodeId t, const Hierarchy& h,
                  const NodeModelSet& models, double depth_bonus = 0.0);

/// Best-scoring node over the whole tree; ties prefer the deeper node, then
/// the lower id. Knownness is the best leaf score.
ClassificationResult classify_score_based(std::span<const double> x, const Hierarchy& h,
                                          const NodeModelSet& models,
                                          const ClassifierConfig& config = {});

/// Root-to-leaf descent driven by the children's outlier detectors, with the
/// child classifier breaking double acceptances. Stops at an internal node
/// when both children reject. Knownness is the smallest accepted-child margin
/// along the path; a stop contributes the best (negative) rejected margin.
ClassificationResult classify_traversal(std::span<const double> x, const Hierarchy& h,
                                        const NodeModelSet& models);

/// Dispatches on config.mode.
ClassificationResult classify(std::span<const double> x, const Hierarchy& h,
                              const NodeModelSet& models, const ClassifierConfig& config);

/// Classifies every sample in order, filling sample_id and true_label.
/// Errors are rethrown as std::invalid_argument prefixed with the sample id.
std::vector<ClassificationResult> classify_batch(std::span<const LabeledSample> samples,
                                                 const Hierarchy& h,
                                                 const NodeModelSet& models,
                                                 const ClassifierConfig& config);

}  // namespace hosr
