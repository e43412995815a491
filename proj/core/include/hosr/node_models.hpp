#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "hosr/dataset.hpp"
#include "hosr/hierarchy.hpp"

namespace hosr {

/// Centroid and distance spread of the training samples under one node.
struct NodeStats {
  NodeId node_id = 0;
  EmbeddingVector centroid;
  double mean_dist = 0.0;
  /// Population standard deviation.
  double std_dist = 0.0;
  std::size_t train_count = 0;

  friend bool operator==(const NodeStats&, const NodeStats&) = default;
};

/// Distance-to-centroid cutoff fitted at a percentile of training distances.
struct OutlierDetector {
  NodeId node_id = 0;
  double threshold = 0.0;
  double percentile = 95.0;

  friend bool operator==(const OutlierDetector&, const OutlierDetector&) = default;
};

/// Nearest-centroid decision between the two children of an internal node.
struct ChildClassifier {
  NodeId parent_node_id = 0;
  EmbeddingVector left_centroid;
  EmbeddingVector right_centroid;

  friend bool operator==(const ChildClassifier&, const ChildClassifier&) = default;
};

struct NodeModelSet {
  std::map<NodeId, NodeStats> stats;
  std::map<NodeId, OutlierDetector> detectors;
  std::map<NodeId, ChildClassifier> classifiers;
  /// Stand-in for std_dist when it is zero.
  double epsilon = 1e-9;

  /// True when stats and detectors cover every node and classifiers cover
  /// every internal node of `h`.
  bool covers(const Hierarchy& h) const;

  friend bool operator==(const NodeModelSet&, const NodeModelSet&) = default;
};

inline constexpr double kDefaultPercentile = 95.0;
inline constexpr double kDefaultEpsilon = 1e-9;

/// Percentile of `values` with linear interpolation between closest ranks
/// (rank = p/100 * (n-1)). `p` in [0, 100]; `values` need not be sorted.
double percentile_linear(std::vector<double> values, double p);

/// Fits stats, detectors and child classifiers for every node of `h`.
///
/// Throws std::invalid_argument when a hierarchy class has no training
/// samples, a training sample's class is not in `h`, or `percentile` is
/// outside (0, 100].
NodeModelSet fit_node_models(const Hierarchy& h, const Dataset& train,
                             double percentile = kDefaultPercentile,
                             double epsilon = kDefaultEpsilon);

struct InlierDecision {
  bool inlier = false;
  /// threshold - distance; nonnegative exactly for inliers.
  double margin = 0.0;
};

InlierDecision is_inlier(const OutlierDetector& detector, const NodeStats& stats,
                         std::span<const double> x);

enum class ChildSide { left, right };

struct ChildChoice {
  ChildSide side = ChildSide::left;
  /// |d_right - d_left|; equidistant points go left with margin 0.
  double margin = 0.0;
};

ChildChoice pick_child(const ChildClassifier& classifier, std::span<const double> x);

}  // namespace hosr
