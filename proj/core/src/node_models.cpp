#include "hosr/node_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hosr {

bool NodeModelSet::covers(const Hierarchy& h) const {
  for (const auto& n : h.nodes()) {
    if (!stats.contains(n.id) || !detectors.contains(n.id)) return false;
    if (!n.is_leaf() && !classifiers.contains(n.id)) return false;
  }
  return true;
}

double percentile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile must be in [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

NodeModelSet fit_node_models(const Hierarchy& h, const Dataset& train, double percentile,
                             double epsilon) {
  if (!(percentile > 0.0 && percentile <= 100.0)) {
    throw std::invalid_argument("percentile must be in (0, 100], got " +
                                std::to_string(percentile));
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  // Samples under each node: every leaf's samples are appended to all of its
  // ancestors.
  std::vector<std::vector<const LabeledSample*>> under(h.size());
  for (const auto& s : train.samples()) {
    if (!h.has_class(s.class_label)) {
      throw std::invalid_argument("training sample '" + s.sample_id + "' has class '" +
                                  s.class_label + "' which is not in the hierarchy");
    }
    for (std::optional<NodeId> cur = h.leaf_for(s.class_label); cur; cur = h.node(*cur).parent) {
      under[*cur].push_back(&s);
    }
  }

  NodeModelSet models;
  models.epsilon = epsilon;
  const std::size_t dim = train.dimension();
  for (const auto& node : h.nodes()) {
    const auto& members = under[node.id];
    if (members.empty()) {
      throw std::invalid_argument("class '" + node.member_classes.front() +
                                  "' has no training samples");
    }
    NodeStats st;
    st.node_id = node.id;
    st.train_count = members.size();
    st.centroid.assign(dim, 0.0);
    for (const auto* s : members) {
      for (std::size_t i = 0; i < dim; ++i) st.centroid[i] += s->embedding[i];
    }
    for (double& v : st.centroid) v /= static_cast<double>(members.size());

    std::vector<double> dists;
    dists.reserve(members.size());
    for (const auto* s : members) dists.push_back(euclidean_distance(s->embedding, st.centroid));
    double sum = 0.0;
    for (double d : dists) sum += d;
    st.mean_dist = sum / static_cast<double>(dists.size());
    double var = 0.0;
    for (double d : dists) var += (d - st.mean_dist) * (d - st.mean_dist);
    st.std_dist = std::sqrt(var / static_cast<double>(dists.size()));

    models.detectors.emplace(node.id,
                             OutlierDetector{node.id, percentile_linear(dists, percentile),
                                             percentile});
    models.stats.emplace(node.id, std::move(st));
  }
  for (const auto& node : h.nodes()) {
    if (node.is_leaf()) continue;
    models.classifiers.emplace(
        node.id, ChildClassifier{node.id, models.stats.at(node.left()).centroid,
                                 models.stats.at(node.right()).centroid});
  }
  return models;
}

InlierDecision is_inlier(const OutlierDetector& detector, const NodeStats& stats,
                         std::span<const double> x) {
  const double d = euclidean_distance(x, stats.centroid);
  return {d <= detector.threshold, detector.threshold - d};
}

ChildChoice pick_child(const ChildClassifier& classifier, std::span<const double> x) {
  const double dl = euclidean_distance(x, classifier.left_centroid);
  const double dr = euclidean_distance(x, classifier.right_centroid);
  if (dr < dl) return {ChildSide::right, dl - dr};
  return {ChildSide::left, dr - dl};
}

}  // namespace hosr
