#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hosr/dataset.hpp"
#include "hosr/hierarchy.hpp"

namespace hosr {

struct ClassEmbedding {
  ClassLabel class_label;
  EmbeddingVector centroid;
  std::size_t sample_count = 0;
};

/// One centroid per class, sorted by label. Throws std::invalid_argument for
/// an empty dataset.
std::vector<ClassEmbedding> compute_class_embeddings(const Dataset& dataset);

using ClassPair = std::pair<ClassLabel, ClassLabel>;

/// Pairwise class constraints. Pairs are unordered; they are stored with the
/// smaller label first and deduplicated.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::vector<ClassPair> cannot_link, std::vector<ClassPair> must_link);

  const std::vector<ClassPair>& cannot_link() const noexcept { return cannot_link_; }
  const std::vector<ClassPair>& must_link() const noexcept { return must_link_; }
  bool empty() const noexcept { return cannot_link_.empty() && must_link_.empty(); }

  /// Throws std::invalid_argument if a label is not in `known` (sorted).
  void check_labels(std::span<const ClassLabel> known) const;

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

 private:
  std::vector<ClassPair> cannot_link_;
  std::vector<ClassPair> must_link_;
};

enum class DistanceMetric { euclidean, cosine };
enum class Linkage { single, complete, average };

std::string_view to_string(DistanceMetric m);
std::string_view to_string(Linkage l);
/// Throw std::invalid_argument on unrecognised names.
DistanceMetric parse_distance_metric(std::string_view name);
Linkage parse_linkage(std::string_view name);

struct ClusteringConfig {
  DistanceMetric distance_metric = DistanceMetric::euclidean;
  Linkage linkage = Linkage::average;
  bool relax_constraints_when_stuck = true;

  friend bool operator==(const ClusteringConfig&, const ClusteringConfig&) = default;
};

/// Distance between two centroids. Cosine distance is 1 - cos(a, b) and
/// rejects zero vectors.
double point_distance(std::span<const double> a, std::span<const double> b,
                      DistanceMetric metric);

/// Linkage-aggregated distance between two disjoint, nonempty groups.
double cluster_distance(std::span<const ClassEmbedding> a, std::span<const ClassEmbedding> b,
                        const ClusteringConfig& config);

enum class MergeKind { must_link, regular, relaxed };

std::string_view to_string(MergeKind k);
MergeKind parse_merge_kind(std::string_view name);

struct MergeRecord {
  NodeId left = 0;
  NodeId right = 0;
  NodeId merged = 0;
  double distance = 0.0;
  MergeKind kind = MergeKind::regular;

  friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

struct HierarchyBuild {
  Hierarchy hierarchy;
  /// In merge order; `merged` equals n + position.
  std::vector<MergeRecord> merges;
  /// One entry per merge that broke a cannot-link constraint.
  std::vector<std::string> warnings;
};

/// Constrained agglomerative clustering over class centroids.
///
/// Must-link pairs are merged first, closest pair first. Afterwards the
/// closest pair of active clusters whose union holds no cannot-link pair is
/// merged; when only forbidden merges remain the closest one is taken anyway
/// (relaxed) or, with relaxation disabled, ConstraintDeadlockError is thrown.
/// Equal distances resolve to the lexicographically least
/// (smaller-label, larger-label) pair, where a cluster's label is its
/// smallest member label.
HierarchyBuild build_hierarchy(std::span<const ClassEmbedding> classes,
                               const ConstraintSet& constraints,
                               const ClusteringConfig& config);

}  // namespace hosr
