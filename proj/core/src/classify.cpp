#include "hosr/classify.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "hosr/errors.hpp"

namespace hosr {

std::string_view to_string(ClassifierMode m) {
  return m == ClassifierMode::score_based ? "score_based" : "traversal_based";
}

ClassifierMode parse_classifier_mode(std::string_view name) {
  if (name == "score" || name == "score_based") return ClassifierMode::score_based;
  if (name == "traversal" || name == "traversal_based") return ClassifierMode::traversal_based;
  throw std::invalid_argument("unknown classifier mode '" + std::string(name) + "'");
}

namespace {

void require_fitted(const Hierarchy& h, const NodeModelSet& models) {
  if (h.empty()) throw InvalidStateError("hierarchy is empty");
  if (!models.covers(h)) throw InvalidStateError("node models are not fitted for this hierarchy");
}

void require_dimension(const Hierarchy& h, const NodeModelSet& models,
                       std::span<const double> x) {
  const auto& root = models.stats.at(h.root());
  if (x.size() != root.centroid.size()) {
    throw std::invalid_argument("sample has dimension " + std::to_string(x.size()) +
                                ", models expect " + std::to_string(root.centroid.size()));
  }
}

ClassificationResult finish(const Hierarchy& h, NodeId predicted, double knownness) {
  ClassificationResult r;
  r.predicted_node = predicted;
  r.path = h.path_from_root(predicted);
  r.knownness_score = knownness;
  r.is_leaf_prediction = h.node(predicted).is_leaf();
  return r;
}

}  // namespace

double node_score(std::span<const double> x, NodeId t, const Hierarchy& h,
                  const NodeModelSet& models, double depth_bonus) {
  const auto it = models.stats.find(t);
  if (it == models.stats.end()) {
    throw InvalidStateError("no node statistics for node " + std::to_string(t));
  }
  const NodeStats& st = it->second;
  const double d = euclidean_distance(x, st.centroid);
  const double spread = std::max(st.std_dist, models.epsilon);
  return -(d - st.mean_dist) / spread + depth_bonus * h.node(t).depth;
}

ClassificationResult classify_score_based(std::span<const double> x, const Hierarchy& h,
                                          const NodeModelSet& models,
                                          const ClassifierConfig& config) {
  require_fitted(h, models);
  require_dimension(h, models, x);
  if (!(config.depth_bonus >= 0.0)) throw std::invalid_argument("depth_bonus must be >= 0");

  NodeId best = h.root();
  double best_score = -std::numeric_limits<double>::infinity();
  double best_leaf = -std::numeric_limits<double>::infinity();
  bool first = true;
  for (const auto& n : h.nodes()) {
    const double s = node_score(x, n.id, h, models, config.depth_bonus);
    if (n.is_leaf()) best_leaf = std::max(best_leaf, s);
    // Nodes are visited in ascending id, so only strictly better scores or
    // strictly deeper ties replace the incumbent.
    const bool better = s > best_score ||
                        (s == best_score && n.depth > h.node(best).depth);
    if (first || better) {
      best = n.id;
      best_score = s;
      first = false;
    }
  }
  return finish(h, best, best_leaf);
}

ClassificationResult classify_traversal(std::span<const double> x, const Hierarchy& h,
                                        const NodeModelSet& models) {
  require_fitted(h, models);
  require_dimension(h, models, x);

  const NodeId root = h.root();
  const auto root_check = is_inlier(models.detectors.at(root), models.stats.at(root), x);

  std::vector<TraversalStep> steps;
  double knownness = std::numeric_limits<double>::infinity();
  NodeId cur = root;
  while (!h.node(cur).is_leaf()) {
    const auto& node = h.node(cur);
    TraversalStep step;
    step.node = cur;
    step.left = is_inlier(models.detectors.at(node.left()), models.stats.at(node.left()), x);
    step.right = is_inlier(models.detectors.at(node.right()), models.stats.at(node.right()), x);

    NodeId next = cur;
    if (step.left.inlier && step.right.inlier) {
      step.choice = pick_child(models.classifiers.at(cur), x);
      next = step.choice->side == ChildSide::left ? node.left() : node.right();
    } else if (step.left.inlier) {
      next = node.left();
    } else if (step.right.inlier) {
      next = node.right();
    }

    if (next == cur) {
      knownness = std::min(knownness, std::max(step.left.margin, step.right.margin));
      steps.push_back(step);
      break;
    }
    knownness = std::min(knownness,
                         next == node.left() ? step.left.margin : step.right.margin);
    steps.push_back(step);
    cur = next;
  }
  // A single-leaf tree never takes a step.
  if (steps.empty()) knownness = root_check.margin;

  auto r = finish(h, cur, knownness);
  r.root_check = root_check;
  r.steps = std::move(steps);
  return r;
}

ClassificationResult classify(std::span<const double> x, const Hierarchy& h,
                              const NodeModelSet& models, const ClassifierConfig& config) {
  if (config.mode == ClassifierMode::traversal_based) return classify_traversal(x, h, models);
  return classify_score_based(x, h, models, config);
}

std::vector<ClassificationResult> classify_batch(std::span<const LabeledSample> samples,
                                                 const Hierarchy& h,
                                                 const NodeModelSet& models,
                                                 const ClassifierConfig& config) {
  require_fitted(h, models);
  std::vector<ClassificationResult> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    try {
      auto r = classify(s.embedding, h, models, config);
      r.sample_id = s.sample_id;
      if (!s.class_label.empty()) r.true_label = s.class_label;
      out.push_back(std::move(r));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("sample '" + s.sample_id + "': " + e.what());
    }
  }
  return out;
}

}  // namespace hosr
