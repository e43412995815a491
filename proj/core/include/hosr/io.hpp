#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hosr/classify.hpp"
#include "hosr/clustering.hpp"
#include "hosr/dataset.hpp"
#include "hosr/hierarchy.hpp"
#include "hosr/node_models.hpp"
#include "hosr/report.hpp"

namespace hosr {

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Embedding CSV: header `sample_id,<label column>,<feature names...>`, one
// sample per row, no quoting. Blank lines are ignored.

struct EmbeddingFileHeader {
  std::size_t dimension = 0;
  std::size_t sample_count = 0;
  std::string label_column = "label";
};

struct EmbeddingFile {
  EmbeddingFileHeader header;
  Dataset dataset;
};

/// Throws ParseError naming `source` and the offending line.
EmbeddingFile read_embeddings_csv(std::istream& in, const std::string& source = "<stream>");
Dataset load_embeddings_csv(const std::filesystem::path& path);

/// Feature columns are named f0..f{d-1}; reals use shortest round-trip form.
void write_embeddings_csv(std::ostream& out, const Dataset& dataset,
                          std::string_view label_column = "label");
void save_embeddings_csv(const std::filesystem::path& path, const Dataset& dataset);

// ---------------------------------------------------------------------------
// Constraint file: {"cannot_link": [[a, b], ...], "must_link": [[a, b], ...]}

ConstraintSet parse_constraints_json(std::string_view text);
ConstraintSet load_constraints(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Model file: hierarchy, clustering config, merge log and (after training)
// node models in one versioned JSON document.

struct ModelBundle {
  Hierarchy hierarchy;
  ClusteringConfig clustering;
  std::vector<MergeRecord> merge_log;
  std::vector<std::string> warnings;
  std::optional<NodeModelSet> models;

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

/// Throws std::invalid_argument if the hierarchy is invalid.
std::string model_to_json(const ModelBundle& bundle);
/// Throws SchemaError on version mismatch, missing fields or broken invariants.
ModelBundle model_from_json(std::string_view text);

void save_model(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_model(const std::filesystem::path& path);

/// Ground-truth tree written by the synthetic generator.
struct PlantedTree {
  Hierarchy hierarchy;
  std::vector<ClassLabel> unseen_classes;

  friend bool operator==(const PlantedTree&, const PlantedTree&) = default;
};

std::string planted_tree_to_json(const PlantedTree& tree);
PlantedTree planted_tree_from_json(std::string_view text);
void save_planted_tree(const std::filesystem::path& path, const PlantedTree& tree);
PlantedTree load_planted_tree(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Tree interchange.

/// Graphviz digraph. Leaves show their class, internal nodes a member summary
/// and merge distance. `heat` values (e.g. CC scores in [0, 1]) are printed
/// and shade the node.
std::string export_dot(const Hierarchy& h, const std::map<NodeId, double>& heat = {});

/// Newick with branch length = parent merge distance - own merge distance.
std::string export_newick(const Hierarchy& h);

// ---------------------------------------------------------------------------
// Reports and predictions.

enum class ReportFormat { json, text };
ReportFormat parse_report_format(std::string_view name);

std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(std::string_view text);
/// Fixed-order table, one metric per line.
std::string report_to_text(const MetricsReport& report);
void write_report(const MetricsReport& report, ReportFormat format,
                  const std::filesystem::path& path);

/// CSV: sample_id,true_label,predicted_node,predicted_label,is_leaf,knownness,path
/// where predicted_label is the leaf class or empty and path is ids joined by '/'.
void write_predictions_csv(std::ostream& out, std::span<const ClassificationResult> results,
                           const Hierarchy& h);

// ---------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory, then renames.
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

}  // namespace hosr
