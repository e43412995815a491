#include "hosr/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "hosr/errors.hpp"

namespace hosr {

std::vector<ClassEmbedding> compute_class_embeddings(const Dataset& dataset) {
  if (dataset.empty() || dataset.classes().empty()) {
    throw std::invalid_argument("compute_class_embeddings: dataset has no classes");
  }
  std::map<ClassLabel, ClassEmbedding> acc;
  for (const auto& s : dataset.samples()) {
    auto& e = acc[s.class_label];
    if (e.sample_count == 0) {
      e.class_label = s.class_label;
      e.centroid.assign(dataset.dimension(), 0.0);
    }
    for (std::size_t i = 0; i < s.embedding.size(); ++i) e.centroid[i] += s.embedding[i];
    ++e.sample_count;
  }
  std::vector<ClassEmbedding> out;
  out.reserve(acc.size());
  for (auto& [label, e] : acc) {
    for (double& v : e.centroid) v /= static_cast<double>(e.sample_count);
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

ClassPair normalize_pair(ClassPair p) {
  if (p.first == p.second) {
    throw std::invalid_argument("constraint pairs a class with itself: '" + p.first + "'");
  }
  if (p.second < p.first) std::swap(p.first, p.second);
  return p;
}

std::vector<ClassPair> normalize_pairs(std::vector<ClassPair> pairs) {
  for (auto& p : pairs) p = normalize_pair(std::move(p));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

}  // namespace

ConstraintSet::ConstraintSet(std::vector<ClassPair> cannot_link, std::vector<ClassPair> must_link)
    : cannot_link_(normalize_pairs(std::move(cannot_link))),
      must_link_(normalize_pairs(std::move(must_link))) {
  std::vector<ClassPair> both;
  std::set_intersection(cannot_link_.begin(), cannot_link_.end(), must_link_.begin(),
                        must_link_.end(), std::back_inserter(both));
  if (!both.empty()) {
    throw std::invalid_argument("pair (" + both.front().first + ", " + both.front().second +
                                ") is both must-link and cannot-link");
  }
}

void ConstraintSet::check_labels(std::span<const ClassLabel> known) const {
  auto check = [&](const ClassLabel& l) {
    if (!std::binary_search(known.begin(), known.end(), l)) {
      throw std::invalid_argument("constraint references unknown class '" + l + "'");
    }
  };
  for (const auto& [a, b] : cannot_link_) { check(a); check(b); }
  for (const auto& [a, b] : must_link_) { check(a); check(b); }
}

std::string_view to_string(DistanceMetric m) {
  return m == DistanceMetric::euclidean ? "euclidean" : "cosine";
}

std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "average";
}

std::string_view to_string(MergeKind k) {
  switch (k) {
    case MergeKind::must_link: return "must_link";
    case MergeKind::regular: return "regular";
    case MergeKind::relaxed: return "relaxed";
  }
  return "regular";
}

DistanceMetric parse_distance_metric(std::string_view name) {
  if (name == "euclidean") return DistanceMetric::euclidean;
  if (name == "cosine") return DistanceMetric::cosine;
  throw std::invalid_argument("unknown distance metric '" + std::string(name) + "'");
}

Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  throw std::invalid_argument("unknown linkage '" + std::string(name) + "'");
}

MergeKind parse_merge_kind(std::string_view name) {
  if (name == "must_link") return MergeKind::must_link;
  if (name == "regular") return MergeKind::regular;
  if (name == "relaxed") return MergeKind::relaxed;
  throw std::invalid_argument("unknown merge kind '" + std::string(name) + "'");
}

double point_distance(std::span<const double> a, std::span<const double> b,
                      DistanceMetric metric) {
  if (metric == DistanceMetric::euclidean) return euclidean_distance(a, b);
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("cosine distance is undefined for a zero vector");
  }
  const double cos = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return 1.0 - cos;
}

double cluster_distance(std::span<const ClassEmbedding> a, std::span<const ClassEmbedding> b,
                        const ClusteringConfig& config) {
  if (a.empty() || b.empty()) throw std::invalid_argument("cluster_distance: empty cluster");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double sum = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (x.class_label == y.class_label) {
        throw std::invalid_argument("cluster_distance: clusters share class '" +
                                    x.class_label + "'");
      }
      const double d = point_distance(x.centroid, y.centroid, config.distance_metric);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      sum += d;
    }
  }
  switch (config.linkage) {
    case Linkage::single: return lo;
    case Linkage::complete: return hi;
    case Linkage::average: break;
  }
  return sum / static_cast<double>(a.size() * b.size());
}

namespace {

// Relative slack under which two merge distances count as tied.
constexpr double kTieTolerance = 1e-12;

bool tied(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// Agglomeration state over cluster slots. Slot i starts as class i; merging
// slots i and j keeps the union in the slot with the smaller label.
class Agglomerator {
 public:
  Agglomerator(std::span<const ClassEmbedding> classes, const ConstraintSet& constraints,
               const ClusteringConfig& config)
      : n_(classes.size()), config_(config), dist_(n_ * n_, 0.0),
        blocked_(n_ * n_, false), linked_(n_ * n_, false) {
    for (std::size_t i = 0; i < n_; ++i) {
      labels_.push_back(classes[i].class_label);
      slots_.push_back({static_cast<NodeId>(i), 1, true});
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d = point_distance(classes[i].centroid, classes[j].centroid,
                                        config.distance_metric);
        dist_[i * n_ + j] = dist_[j * n_ + i] = d;
      }
    }
    auto index_of = [&](const ClassLabel& l) {
      return static_cast<std::size_t>(
          std::lower_bound(labels_.begin(), labels_.end(), l) - labels_.begin());
    };
    for (const auto& [a, b] : constraints.cannot_link()) set_pair(blocked_, index_of(a), index_of(b));
    for (const auto& [a, b] : constraints.must_link()) set_pair(linked_, index_of(a), index_of(b));
  }

  std::size_t active_count() const {
    return static_cast<std::size_t>(
        std::count_if(slots_.begin(), slots_.end(), [](const Slot& s) { return s.active; }));
  }

  struct Candidate {
    std::size_t i;
    std::size_t j;
    double distance;
  };

  // Closest active pair accepted by `allow`; slot order already matches
  // label order, so (i, j) with i < j is the lexicographic tie-break key.
  template <typename Allow>
  std::optional<Candidate> closest(Allow allow) const {
    std::optional<Candidate> best;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!slots_[i].active) continue;
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (!slots_[j].active || !allow(i, j)) continue;
        const double d = dist_[i * n_ + j];
        if (!best || (d < best->distance && !tied(d, best->distance))) {
          best = Candidate{i, j, d};
        }
      }
    }
    return best;
  }

  bool blocked(std::size_t i, std::size_t j) const { return blocked_[i * n_ + j]; }
  bool linked(std::size_t i, std::size_t j) const { return linked_[i * n_ + j]; }

  MergeRecord merge(const Candidate& c, NodeId new_node, MergeKind kind) {
    const std::size_t i = c.i;
    const std::size_t j = c.j;
    MergeRecord rec{slots_[i].node, slots_[j].node, new_node, c.distance, kind};
    const double wi = static_cast<double>(slots_[i].size);
    const double wj = static_cast<double>(slots_[j].size);
    for (std::size_t k = 0; k < n_; ++k) {
      if (!slots_[k].active || k == i || k == j) continue;
      const double dik = dist_[i * n_ + k];
      const double djk = dist_[j * n_ + k];
      double d = 0.0;
      switch (config_.linkage) {
        case Linkage::single: d = std::min(dik, djk); break;
        case Linkage::complete: d = std::max(dik, djk); break;
        case Linkage::average: d = (wi * dik + wj * djk) / (wi + wj); break;
      }
      dist_[i * n_ + k] = dist_[k * n_ + i] = d;
      if (blocked_[j * n_ + k]) set_pair(blocked_, i, k);
      if (linked_[j * n_ + k]) set_pair(linked_, i, k);
    }
    slots_[i].node = new_node;
    slots_[i].size += slots_[j].size;
    slots_[j].active = false;
    return rec;
  }

  const ClassLabel& label(std::size_t slot) const { return labels_[slot]; }

 private:
  struct Slot {
    NodeId node;
    std::size_t size;
    bool active;
  };

  void set_pair(std::vector<bool>& m, std::size_t a, std::size_t b) {
    m[a * n_ + b] = true;
    m[b * n_ + a] = true;
  }

  std::size_t n_;
  ClusteringConfig config_;
  std::vector<ClassLabel> labels_;
  std::vector<Slot> slots_;
  std::vector<double> dist_;
  std::vector<bool> blocked_;
  std::vector<bool> linked_;
};

}  // namespace

HierarchyBuild build_hierarchy(std::span<const ClassEmbedding> classes,
                               const ConstraintSet& constraints,
                               const ClusteringConfig& config) {
  if (classes.size() < 2) {
    throw std::invalid_argument("need >= 2 classes to build a hierarchy, got " +
                                std::to_string(classes.size()));
  }
  std::vector<ClassEmbedding> sorted(classes.begin(), classes.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.class_label < b.class_label; });
  std::vector<ClassLabel> labels;
  for (const auto& c : sorted) {
    if (!labels.empty() && labels.back() == c.class_label) {
      throw std::invalid_argument("duplicate class '" + c.class_label + "'");
    }
    if (c.sample_count == 0) {
      throw std::invalid_argument("class '" + c.class_label + "' has no samples");
    }
    check_embedding(c.centroid, sorted.front().centroid.size());
    labels.push_back(c.class_label);
  }
  constraints.check_labels(labels);

  const auto n = static_cast<NodeId>(sorted.size());
  Agglomerator agg(sorted, constraints, config);
  HierarchyBuild out;

  auto record = [&](const Agglomerator::Candidate& c, MergeKind kind) {
    const NodeId next = n + static_cast<NodeId>(out.merges.size());
    if (kind == MergeKind::relaxed || agg.blocked(c.i, c.j)) {
      out.warnings.push_back("merge into node " + std::to_string(next) + " ('" +
                             agg.label(c.i) + "' group with '" + agg.label(c.j) +
                             "' group) violates a cannot-link constraint");
    }
    out.merges.push_back(agg.merge(c, next, kind));
  };

  while (auto c = agg.closest([&](auto i, auto j) { return agg.linked(i, j); })) {
    if (agg.blocked(c->i, c->j) && !config.relax_constraints_when_stuck) {
      throw ConstraintDeadlockError("must-link merge of '" + agg.label(c->i) + "' and '" +
                                    agg.label(c->j) + "' groups breaks a cannot-link constraint");
    }
    record(*c, MergeKind::must_link);
  }

  while (agg.active_count() > 1) {
    if (auto c = agg.closest([&](auto i, auto j) { return !agg.blocked(i, j); })) {
      record(*c, MergeKind::regular);
      continue;
    }
    if (!config.relax_constraints_when_stuck) {
      throw ConstraintDeadlockError(
          "no merge satisfies the cannot-link constraints and relaxation is disabled (" +
          std::to_string(agg.active_count()) + " clusters remain)");
    }
    record(*agg.closest([](auto, auto) { return true; }), MergeKind::relaxed);
  }

  std::vector<MergeStep> steps;
  steps.reserve(out.merges.size());
  for (const auto& m : out.merges) steps.push_back({m.left, m.right, m.distance});
  out.hierarchy = Hierarchy::from_merges(labels, steps);
  // Report children in the hierarchy's left/right order.
  for (auto& m : out.merges) {
    const auto& node = out.hierarchy.node(m.merged);
    m.left = node.left();
    m.right = node.right();
  }
  return out;
}

}  // namespace hosr
