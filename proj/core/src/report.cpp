#include "hosr/report.hpp"

#include <algorithm>

namespace hosr {

namespace {

DetectionSummary summarize(const DetectionCounts& counts) {
  const auto prf = precision_recall_f1(counts);
  return {counts, prf.precision, prf.recall, prf.f1};
}

}  // namespace

MetricsReport build_report(std::span<const ClassificationResult> results, const Hierarchy& h,
                           std::string mode) {
  MetricsReport rep;
  rep.mode = std::move(mode);
  rep.sample_count = results.size();

  std::vector<ClassificationResult> known;
  std::vector<ScoredLabel> scored;
  for (const auto& r : results) {
    if (!r.true_label) continue;
    const bool is_known = h.has_class(*r.true_label);
    if (is_known) known.push_back(r);
    scored.push_back({r.knownness_score, is_known});
  }
  rep.known_count = known.size();
  rep.unseen_count = scored.size() - known.size();

  rep.leaf_decision = summarize(unknown_detection_counts(results, h));
  if (rep.known_count > 0 && rep.unseen_count > 0) {
    rep.auc_roc = roc_auc(scored);
    rep.roc_curve = roc_curve(scored);
    const auto best = youden_optimal(rep.roc_curve);
    rep.youden_threshold = best.threshold;
    rep.youden_decision = summarize(unknown_detection_counts_at(results, h, best.threshold));
  }

  const bool has_root_leaf = std::any_of(known.begin(), known.end(), [&](const auto& r) {
    return h.node(h.leaf_for(*r.true_label)).depth == 0;
  });
  if (!known.empty() && !has_root_leaf) {
    rep.utility = utility(known, h, UtilityMode::ancestor_only);
    rep.utility_literal = utility(known, h, UtilityMode::literal);
  }

  if (rep.unseen_count > 0) {
    for (const auto& [k, c] : per_class_ccc(results, h)) {
      rep.per_class_ccc[k] = {c.best_node, c.ccc};
    }
    double sum = 0.0;
    for (const auto& [k, c] : rep.per_class_ccc) sum += c.ccc;
    rep.mean_ccc = sum / static_cast<double>(rep.per_class_ccc.size());
  }
  return rep;
}

}  // namespace hosr
