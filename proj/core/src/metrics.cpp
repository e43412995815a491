#include "hosr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>

namespace hosr {

double utility(std::span<const ClassificationResult> results, const Hierarchy& h,
               UtilityMode mode) {
  if (results.empty()) throw std::invalid_argument("utility: no results");
  double total = 0.0;
  for (const auto& r : results) {
    if (!r.true_label) {
      throw std::invalid_argument("utility: sample '" + r.sample_id + "' has no true label");
    }
    const NodeId leaf = h.leaf_for(*r.true_label);
    const int leaf_depth = h.node(leaf).depth;
    if (leaf_depth < 1) {
      throw std::invalid_argument("utility: leaf of class '" + *r.true_label + "' is the root");
    }
    if (mode == UtilityMode::ancestor_only && !h.is_ancestor_or_self(r.predicted_node, leaf)) {
      continue;
    }
    total += static_cast<double>(h.node(r.predicted_node).depth) / leaf_depth;
  }
  return total / static_cast<double>(results.size());
}

AssignmentDistribution assignment_distribution(std::span<const ClassificationResult> results,
                                               const ClassLabel& label) {
  std::map<NodeId, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& r : results) {
    if (r.true_label != label) continue;
    ++counts[r.predicted_node];
    ++total;
  }
  if (total == 0) {
    throw std::invalid_argument("assignment_distribution: no samples of class '" + label + "'");
  }
  AssignmentDistribution out{label, {}};
  for (const auto& [node, c] : counts) {
    out.proportions[node] = static_cast<double>(c) / static_cast<double>(total);
  }
  return out;
}

namespace {

void check_distribution(const AssignmentDistribution& dist, std::size_t node_count) {
  double sum = 0.0;
  for (const auto& [node, p] : dist.proportions) {
    if (node < 0 || static_cast<std::size_t>(node) >= node_count) {
      throw std::invalid_argument("assignment distribution references unknown node " +
                                  std::to_string(node));
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("assignment proportion outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("assignment proportions sum to " + std::to_string(sum));
  }
}

}  // namespace

double concentration_centrality(std::size_t t, const AssignmentDistribution& dist,
                                const TreeDistances& d) {
  if (t >= d.size()) throw std::invalid_argument("unknown node id " + std::to_string(t));
  check_distribution(dist, d.size());
  const int dmax = d.max_from(t);
  if (dmax == 0) return 1.0;
  double spread = 0.0;
  for (const auto& [node, p] : dist.proportions) {
    spread += static_cast<double>(d(t, static_cast<std::size_t>(node))) / dmax * p;
  }
  // Rounding in the weighted sum can push the result a hair outside [0, 1].
  return std::clamp(1.0 - spread, 0.0, 1.0);
}

double concentration_centrality(NodeId t, const AssignmentDistribution& dist,
                                const Hierarchy& h) {
  h.node(t);
  return concentration_centrality(static_cast<std::size_t>(t), dist, TreeDistances(h));
}

ConcentrationCenter class_concentration_centrality(const AssignmentDistribution& dist,
                                                   const TreeDistances& d) {
  if (d.size() == 0) throw std::invalid_argument("empty tree");
  ConcentrationCenter best{0, -1.0};
  for (std::size_t t = 0; t < d.size(); ++t) {
    const double cc = concentration_centrality(t, dist, d);
    // Values equal up to rounding count as ties.
    if (cc > best.ccc + 1e-12) best = {static_cast<NodeId>(t), cc};
  }
  return best;
}

ConcentrationCenter class_concentration_centrality(const AssignmentDistribution& dist,
                                                   const Hierarchy& h) {
  return class_concentration_centrality(dist, TreeDistances(h));
}

std::map<ClassLabel, ConcentrationCenter> per_class_ccc(
    std::span<const ClassificationResult> results, const Hierarchy& h) {
  std::set<ClassLabel> unseen;
  for (const auto& r : results) {
    if (r.true_label && !h.has_class(*r.true_label)) unseen.insert(*r.true_label);
  }
  const TreeDistances d(h);
  std::map<ClassLabel, ConcentrationCenter> out;
  for (const auto& k : unseen) {
    out.emplace(k, class_concentration_centrality(assignment_distribution(results, k), d));
  }
  return out;
}

double mean_ccc(std::span<const ClassificationResult> results, const Hierarchy& h) {
  const auto per_class = per_class_ccc(results, h);
  if (per_class.empty()) throw std::invalid_argument("mean_ccc: no unseen classes in results");
  double sum = 0.0;
  for (const auto& [k, c] : per_class) sum += c.ccc;
  return sum / static_cast<double>(per_class.size());
}

double closeness_centrality(std::size_t t, const TreeDistances& d) {
  if (t >= d.size()) throw std::invalid_argument("unknown node id " + std::to_string(t));
  long long total = 0;
  for (std::size_t u = 0; u < d.size(); ++u) total += d(t, u);
  return total == 0 ? 0.0 : 1.0 / static_cast<double>(total);
}

namespace {

struct LabelCounts {
  std::uint64_t known = 0;
  std::uint64_t unknown = 0;
};

std::vector<ScoredLabel> sorted_checked(std::span<const ScoredLabel> samples) {
  LabelCounts c;
  for (const auto& s : samples) {
    if (std::isnan(s.score)) throw std::invalid_argument("roc: NaN score");
    (s.is_known ? c.known : c.unknown) += 1;
  }
  if (c.known == 0 || c.unknown == 0) {
    throw std::invalid_argument("roc: need at least one known and one unknown sample");
  }
  std::vector<ScoredLabel> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
  return v;
}

}  // namespace

double roc_auc(std::span<const ScoredLabel> samples) {
  const auto v = sorted_checked(samples);
  // Twice the Mann-Whitney U statistic, kept integral.
  std::uint64_t twice_u = 0;
  std::uint64_t unknown_below = 0;
  LabelCounts totals;
  for (std::size_t i = 0; i < v.size();) {
    LabelCounts group;
    std::size_t j = i;
    for (; j < v.size() && v[j].score == v[i].score; ++j) {
      (v[j].is_known ? group.known : group.unknown) += 1;
    }
    twice_u += group.known * (2 * unknown_below + group.unknown);
    unknown_below += group.unknown;
    totals.known += group.known;
    totals.unknown += group.unknown;
    i = j;
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(totals.known) * static_cast<double>(totals.unknown));
}

std::vector<RocPoint> roc_curve(std::span<const ScoredLabel> samples) {
  auto v = sorted_checked(samples);
  std::reverse(v.begin(), v.end());
  LabelCounts totals;
  for (const auto& s : v) (s.is_known ? totals.known : totals.unknown) += 1;

  std::vector<RocPoint> curve{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  LabelCounts above;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    for (; j < v.size() && v[j].score == v[i].score; ++j) {
      (v[j].is_known ? above.known : above.unknown) += 1;
    }
    curve.push_back({v[i].score, static_cast<double>(above.known) / totals.known,
                     static_cast<double>(above.unknown) / totals.unknown});
    i = j;
  }
  return curve;
}

RocPoint youden_optimal(std::span<const RocPoint> curve) {
  if (curve.empty()) throw std::invalid_argument("youden_optimal: empty curve");
  RocPoint best = curve.front();
  for (const auto& p : curve) {
    if (p.tpr - p.fpr > best.tpr - best.fpr) best = p;
  }
  return best;
}

PrecisionRecall precision_recall_f1(const DetectionCounts& c) {
  PrecisionRecall out;
  const auto predicted = c.true_positive + c.false_positive;
  const auto actual = c.true_positive + c.false_negative;
  if (predicted > 0) out.precision = static_cast<double>(c.true_positive) / predicted;
  if (actual > 0) out.recall = static_cast<double>(c.true_positive) / actual;
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

namespace {

template <typename PredictUnknown>
DetectionCounts count_detections(std::span<const ClassificationResult> results,
                                 const Hierarchy& h, PredictUnknown predict_unknown) {
  DetectionCounts c;
  for (const auto& r : results) {
    if (!r.true_label) continue;
    const bool unseen = !h.has_class(*r.true_label);
    const bool flagged = predict_unknown(r);
    if (unseen && flagged) ++c.true_positive;
    else if (!unseen && flagged) ++c.false_positive;
    else if (unseen) ++c.false_negative;
    else ++c.true_negative;
  }
  return c;
}

}  // namespace

DetectionCounts unknown_detection_counts(std::span<const ClassificationResult> results,
                                         const Hierarchy& h) {
  return count_detections(results, h, [&](const ClassificationResult& r) {
    return !h.node(r.predicted_node).is_leaf();
  });
}

DetectionCounts unknown_detection_counts_at(std::span<const ClassificationResult> results,
                                            const Hierarchy& h, double threshold) {
  return count_detections(results, h, [&](const ClassificationResult& r) {
    return r.knownness_score < threshold;
  });
}

PrecisionRecall precision_recall_f1(std::span<const ClassificationResult> results,
                                    const Hierarchy& h) {
  if (results.empty()) throw std::invalid_argument("precision_recall_f1: no results");
  return precision_recall_f1(unknown_detection_counts(results, h));
}

}  // namespace hosr
