#include "hosr/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "hosr/errors.hpp"

namespace hosr {

DatasetSplit split_open_set(const Dataset& dataset, const SplitOptions& options) {
  if (!(options.known_test_fraction >= 0.0 && options.known_test_fraction < 1.0)) {
    throw std::invalid_argument("known test fraction must be in [0, 1)");
  }
  const auto& classes = dataset.classes();
  std::mt19937_64 rng(options.seed);

  std::set<ClassLabel> unseen;
  if (!options.unseen_classes.empty()) {
    for (const auto& u : options.unseen_classes) {
      if (!classes.contains(u)) throw std::invalid_argument("unknown class '" + u + "'");
      unseen.insert(u);
    }
  } else {
    if (options.unseen_count > classes.size()) {
      throw std::invalid_argument("cannot hold out " + std::to_string(options.unseen_count) +
                                  " of " + std::to_string(classes.size()) + " classes");
    }
    std::vector<ClassLabel> pool(classes.begin(), classes.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    unseen.insert(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(options.unseen_count));
  }
  if (classes.size() - unseen.size() < 2) {
    throw std::invalid_argument("need >= 2 known classes after removing " +
                                std::to_string(unseen.size()) + " unseen classes");
  }

  // Per known class, shuffle sample positions and send the first share to test.
  std::map<ClassLabel, std::vector<std::size_t>> by_class;
  const auto& samples = dataset.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) by_class[samples[i].class_label].push_back(i);
  std::vector<bool> to_test(samples.size(), false);
  for (auto& [label, idx] : by_class) {
    if (unseen.contains(label)) {
      for (auto i : idx) to_test[i] = true;
      continue;
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto held = static_cast<std::size_t>(
        std::floor(options.known_test_fraction * static_cast<double>(idx.size()) + 0.5));
    held = std::min(held, idx.size() - 1);
    for (std::size_t k = 0; k < held; ++k) to_test[idx[k]] = true;
  }

  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (to_test[i] ? test : train).push_back(samples[i]);
  }
  return {Dataset(std::move(train), dataset.dimension()),
          Dataset(std::move(test), dataset.dimension()),
          std::vector<ClassLabel>(unseen.begin(), unseen.end())};
}

namespace {

std::string padded(std::size_t value, std::size_t width) {
  auto s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

}  // namespace

SynthData generate_synthetic(const SynthOptions& o) {
  if (o.known_classes < 2) throw std::invalid_argument("synth: need >= 2 known classes");
  if (o.unseen_classes < 1) throw std::invalid_argument("synth: need >= 1 unseen class");
  if (o.dims < 2) throw std::invalid_argument("synth: need >= 2 dimensions");
  if (o.samples_per_class < 1) throw std::invalid_argument("synth: need >= 1 sample per class");
  if (!(o.noise_scale >= 0.0) || !(o.step > 0.0) || !(o.level_base > 1.0)) {
    throw std::invalid_argument("synth: noise must be >= 0, step > 0 and level base > 1");
  }

  const std::size_t n = o.known_classes + o.unseen_classes;
  const std::size_t width = std::to_string(n - 1).size();
  std::vector<ClassLabel> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + padded(i, width));

  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Coalescent: merge two uniformly chosen active nodes until one remains.
  std::vector<int> height(n, 0);
  std::vector<NodeId> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = static_cast<NodeId>(i);
  std::vector<MergeStep> merges;
  auto time_of = [&](int h) { return std::pow(o.level_base, h) - 1.0; };
  while (active.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    const NodeId a = active[i];
    const NodeId b = active[j];
    const int h = std::max(height[a], height[b]) + 1;
    height.push_back(h);
    merges.push_back({a, b, time_of(h)});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(std::min(i, j)));
    active.push_back(static_cast<NodeId>(n + merges.size() - 1));
  }
  Hierarchy tree = Hierarchy::from_merges(labels, merges);

  // Diffuse means from the root down; parents precede children in reverse id order.
  std::vector<EmbeddingVector> mean(tree.size(), EmbeddingVector(o.dims, 0.0));
  for (auto id = static_cast<NodeId>(tree.size()) - 1; id >= 0; --id) {
    const auto& node = tree.node(id);
    if (!node.parent) continue;
    const double span = tree.node(*node.parent).merge_distance - node.merge_distance;
    const double sigma = o.step * std::sqrt(span);
    for (std::size_t k = 0; k < o.dims; ++k) {
      mean[id][k] = mean[*node.parent][k] + sigma * gauss(rng);
    }
  }

  std::vector<ClassLabel> shuffled = labels;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<ClassLabel> unseen(shuffled.begin(),
                                 shuffled.begin() + static_cast<std::ptrdiff_t>(o.unseen_classes));
  std::sort(unseen.begin(), unseen.end());

  SynthData out;
  std::vector<LabeledSample> samples;
  const std::size_t sample_width = std::to_string(o.samples_per_class - 1).size();
  for (const auto& label : labels) {
    const auto& m = mean[tree.leaf_for(label)];
    out.class_means[label] = m;
    for (std::size_t s = 0; s < o.samples_per_class; ++s) {
      LabeledSample smp;
      smp.sample_id = label + "_" + padded(s, sample_width);
      smp.class_label = label;
      smp.embedding.resize(o.dims);
      for (std::size_t k = 0; k < o.dims; ++k) {
        const double noise = gauss(rng);
        smp.embedding[k] = m[k] + o.noise_scale * noise;
      }
      samples.push_back(std::move(smp));
    }
  }
  out.dataset = Dataset(std::move(samples), o.dims);
  out.truth = PlantedTree{std::move(tree), std::move(unseen)};
  return out;
}

ModelBundle build_model(const Dataset& train, const ConstraintSet& constraints,
                        const ClusteringConfig& config) {
  if (train.classes().size() < 2) {
    throw std::invalid_argument("need >= 2 classes to build a hierarchy, got " +
                                std::to_string(train.classes().size()));
  }
  auto build = build_hierarchy(compute_class_embeddings(train), constraints, config);
  ModelBundle b;
  b.hierarchy = std::move(build.hierarchy);
  b.clustering = config;
  b.merge_log = std::move(build.merges);
  b.warnings = std::move(build.warnings);
  return b;
}

void train_model(ModelBundle& bundle, const Dataset& train, double percentile) {
  bundle.models = fit_node_models(bundle.hierarchy, train, percentile);
}

Evaluation evaluate_model(const ModelBundle& bundle, const Dataset& test,
                          const ClassifierConfig& config) {
  if (!bundle.models) throw InvalidStateError("model has no trained node models; run train first");
  Evaluation ev;
  ev.results = classify_batch(test.samples(), bundle.hierarchy, *bundle.models, config);
  ev.report = build_report(ev.results, bundle.hierarchy, std::string(to_string(config.mode)));
  return ev;
}

}  // namespace hosr
