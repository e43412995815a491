#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace hosr {

using ClassLabel = std::string;

/// Dense feature vector produced by an upstream encoder.
using EmbeddingVector = std::vector<double>;

struct LabeledSample {
  std::string sample_id;
  ClassLabel class_label;
  EmbeddingVector embedding;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

/// Immutable collection of labeled samples sharing one dimension.
///
/// Construction enforces: dimension >= 1, every embedding has that dimension
/// and only finite entries, and sample ids are unique. The class set is
/// derived from the samples, so it always equals the set of occurring labels.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<LabeledSample> samples, std::size_t dimension);

  const std::vector<LabeledSample>& samples() const noexcept { return samples_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  /// Sorted, distinct class labels.
  const std::set<ClassLabel>& classes() const noexcept { return classes_; }

  /// Samples whose label is in `keep`, order preserved.
  Dataset filter_classes(const std::set<ClassLabel>& keep) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<LabeledSample> samples_;
  std::size_t dimension_ = 0;
  std::set<ClassLabel> classes_;
};

/// Throws std::invalid_argument if `v` has the wrong size or a non-finite entry.
void check_embedding(std::span<const double> v, std::size_t dimension);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace hosr
