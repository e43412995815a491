#include "hosr/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace hosr {

void check_embedding(std::span<const double> v, std::size_t dimension) {
  if (v.size() != dimension) {
    throw std::invalid_argument("embedding has dimension " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(dimension));
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw std::invalid_argument("embedding entry " + std::to_string(i) +
                                  " is not finite");
    }
  }
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

Dataset::Dataset(std::vector<LabeledSample> samples, std::size_t dimension)
    : samples_(std::move(samples)), dimension_(dimension) {
  if (dimension_ == 0) throw std::invalid_argument("dataset dimension must be >= 1");
  std::unordered_set<std::string> ids;
  for (const auto& s : samples_) {
    if (!ids.insert(s.sample_id).second) {
      throw std::invalid_argument("duplicate sample id '" + s.sample_id + "'");
    }
    try {
      check_embedding(s.embedding, dimension_);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("sample '" + s.sample_id + "': " + e.what());
    }
    classes_.insert(s.class_label);
  }
}

Dataset Dataset::filter_classes(const std::set<ClassLabel>& keep) const {
  std::vector<LabeledSample> kept;
  for (const auto& s : samples_) {
    if (keep.contains(s.class_label)) kept.push_back(s);
  }
  return Dataset(std::move(kept), dimension_);
}

}  // namespace hosr
