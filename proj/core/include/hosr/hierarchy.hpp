#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hosr/dataset.hpp"

namespace hosr {

using NodeId = int;

struct HierarchyNode {
  NodeId id = 0;
  std::optional<NodeId> parent;
  /// Empty for leaves, {left, right} for internal nodes.
  std::vector<NodeId> children;
  std::optional<ClassLabel> leaf_class;
  /// Sorted, distinct.
  std::vector<ClassLabel> member_classes;
  int depth = 0;
  double merge_distance = 0.0;

  bool is_leaf() const noexcept { return children.empty(); }
  NodeId left() const { return children.at(0); }
  NodeId right() const { return children.at(1); }

  friend bool operator==(const HierarchyNode&, const HierarchyNode&) = default;
};

/// One agglomeration step: nodes `a` and `b` become a new parent node.
struct MergeStep {
  NodeId a = 0;
  NodeId b = 0;
  double distance = 0.0;
};

/// Rooted full binary tree over a set of known classes.
///
/// Node ids index directly into `nodes()`. Hierarchies produced by
/// `from_merges` or `checked` satisfy every structural invariant; the
/// unchecked `from_nodes` exists so that malformed trees can be represented
/// and reported by validate_hierarchy().
class Hierarchy {
 public:
  Hierarchy() = default;

  /// Stores `nodes` as given. No invariant checks.
  static Hierarchy from_nodes(std::vector<HierarchyNode> nodes, NodeId root);

  /// Like from_nodes, but throws std::invalid_argument listing every violation.
  static Hierarchy checked(std::vector<HierarchyNode> nodes, NodeId root);

  /// Leaves get ids 0..n-1 in lexicographic label order; the i-th merge
  /// creates node n+i. The left child of each merge is the one whose smallest
  /// member label sorts first. Requires exactly n-1 merges over active nodes.
  static Hierarchy from_merges(std::vector<ClassLabel> leaf_labels,
                               std::span<const MergeStep> merges);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  NodeId root() const noexcept { return root_; }
  const std::vector<HierarchyNode>& nodes() const noexcept { return nodes_; }

  /// Throws std::invalid_argument for an unknown id.
  const HierarchyNode& node(NodeId id) const;
  bool contains(NodeId id) const noexcept;

  const std::map<ClassLabel, NodeId>& class_to_leaf() const noexcept {
    return class_to_leaf_;
  }
  bool has_class(const ClassLabel& label) const {
    return class_to_leaf_.contains(label);
  }
  /// Throws std::invalid_argument for a class that is not a leaf.
  NodeId leaf_for(const ClassLabel& label) const;

  /// Sorted known classes.
  std::vector<ClassLabel> classes() const;
  std::size_t leaf_count() const noexcept { return class_to_leaf_.size(); }

  /// Node ids from the root down to `id`, inclusive.
  std::vector<NodeId> path_from_root(NodeId id) const;
  bool is_ancestor_or_self(NodeId ancestor, NodeId descendant) const;

  friend bool operator==(const Hierarchy&, const Hierarchy&) = default;

 private:
  std::vector<HierarchyNode> nodes_;
  NodeId root_ = 0;
  std::map<ClassLabel, NodeId> class_to_leaf_;
};

/// Edge count of the undirected path between `a` and `b`.
int tree_distance(const Hierarchy& h, NodeId a, NodeId b);

/// Largest tree_distance from `t` to any node; 0 for a single-node tree.
int max_tree_distance(const Hierarchy& h, NodeId t);

/// One human-readable entry per broken invariant; empty when valid.
std::vector<std::string> validate_hierarchy(const Hierarchy& h);

/// Symmetric all-pairs hop distances over nodes 0..n-1.
///
/// Any tree (or connected graph) can be described this way, which lets the
/// centrality metrics run on shapes other than full binary hierarchies.
class TreeDistances {
 public:
  TreeDistances() = default;
  explicit TreeDistances(const Hierarchy& h);
  /// Row-major n*n matrix. Throws std::invalid_argument unless square,
  /// symmetric, zero on the diagonal and nonnegative.
  TreeDistances(std::size_t n, std::vector<int> matrix);

  /// Path graph 0 - 1 - ... - (n-1).
  static TreeDistances path_graph(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  int operator()(std::size_t a, std::size_t b) const { return d_[a * n_ + b]; }
  int max_from(std::size_t t) const { return max_[t]; }

 private:
  std::size_t n_ = 0;
  std::vector<int> d_;
  std::vector<int> max_;
};

/// Rooted Robinson-Foulds distance: size of the symmetric difference of the
/// clade sets (member-class sets of internal nodes). Both trees must cover the
/// same classes.
std::size_t robinson_foulds(const Hierarchy& a, const Hierarchy& b);

}  // namespace hosr
