#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hosr/classify.hpp"
#include "hosr/hierarchy.hpp"
#include "hosr/metrics.hpp"

namespace hosr {

/// Metrics at one binarisation of the known/unknown decision.
struct DetectionSummary {
  DetectionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const DetectionSummary&, const DetectionSummary&) = default;
};

struct ClassCenter {
  NodeId best_node = 0;
  double ccc = 0.0;

  friend bool operator==(const ClassCenter&, const ClassCenter&) = default;
};

/// Everything cmd_eval reports. Fields that need data the run did not have
/// (e.g. AUC without unseen samples) are left empty.
struct MetricsReport {
  std::string mode;
  std::size_t sample_count = 0;
  std::size_t known_count = 0;
  std::size_t unseen_count = 0;

  std::optional<double> auc_roc;
  /// Non-leaf prediction = unknown.
  DetectionSummary leaf_decision;
  /// knownness < Youden-optimal threshold = unknown.
  std::optional<DetectionSummary> youden_decision;
  std::optional<double> youden_threshold;

  std::optional<double> utility;
  std::optional<double> utility_literal;

  std::map<ClassLabel, ClassCenter> per_class_ccc;
  std::optional<double> mean_ccc;

  std::vector<RocPoint> roc_curve;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Computes every metric that the labels in `results` allow.
MetricsReport build_report(std::span<const ClassificationResult> results, const Hierarchy& h,
                           std::string mode);

}  // namespace hosr
