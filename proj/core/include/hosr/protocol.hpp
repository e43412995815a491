#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "hosr/classify.hpp"
#include "hosr/clustering.hpp"
#include "hosr/dataset.hpp"
#include "hosr/io.hpp"
#include "hosr/node_models.hpp"
#include "hosr/report.hpp"

namespace hosr {

// ---------------------------------------------------------------------------
// Open-set split

struct SplitOptions {
  /// Explicit unseen classes. When empty, `unseen_count` classes are drawn.
  std::vector<ClassLabel> unseen_classes;
  std::size_t unseen_count = 0;
  /// Share of each known class held out for testing.
  double known_test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct DatasetSplit {
  Dataset train;
  Dataset test;
  /// Sorted.
  std::vector<ClassLabel> unseen_classes;
};

/// Train gets known-class samples only; test gets every unseen-class sample
/// plus a seeded per-class share of each known class (at least one sample of
/// every known class stays in train). Throws std::invalid_argument for an
/// unknown class name or when fewer than two known classes would remain.
DatasetSplit split_open_set(const Dataset& dataset, const SplitOptions& options);

// ---------------------------------------------------------------------------
// Synthetic data with a planted hierarchy

struct SynthOptions {
  std::size_t known_classes = 8;
  std::size_t unseen_classes = 2;
  std::size_t dims = 16;
  std::size_t samples_per_class = 50;
  /// Per-dimension standard deviation of a unit diffusion step.
  double step = 1.0;
  /// Per-dimension standard deviation of sample noise around class means.
  double noise_scale = 0.1;
  /// Base of the node time scale: a node of height h sits at time
  /// level_base^h - 1, and a branch diffuses for the time it spans.
  double level_base = 3.0;
  std::uint64_t seed = 0;
};

struct SynthData {
  Dataset dataset;
  PlantedTree truth;
  std::map<ClassLabel, EmbeddingVector> class_means;
};

/// Random coalescent tree over known + unseen classes, class means diffused
/// down the tree with variance proportional to branch time, samples drawn
/// around the means. Deterministic per seed. Requires known >= 2,
/// unseen >= 1, dims >= 2, samples_per_class >= 1, noise_scale >= 0.
SynthData generate_synthetic(const SynthOptions& options);

// ---------------------------------------------------------------------------
// Pipeline steps shared by the CLI and the acceptance suite.

/// Class centroids + constrained agglomeration. Requires >= 2 classes.
ModelBundle build_model(const Dataset& train, const ConstraintSet& constraints,
                        const ClusteringConfig& config);

/// Fits node models on `train` and stores them in the bundle.
void train_model(ModelBundle& bundle, const Dataset& train,
                 double percentile = kDefaultPercentile);

struct Evaluation {
  std::vector<ClassificationResult> results;
  MetricsReport report;
};

/// Throws InvalidStateError when the bundle has no trained models.
Evaluation evaluate_model(const ModelBundle& bundle, const Dataset& test,
                          const ClassifierConfig& config);

}  // namespace hosr
