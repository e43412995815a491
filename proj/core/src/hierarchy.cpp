#include "hosr/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace hosr {

namespace {

std::string node_name(NodeId id) { return "node " + std::to_string(id); }

std::map<ClassLabel, NodeId> index_leaves(const std::vector<HierarchyNode>& nodes) {
  std::map<ClassLabel, NodeId> out;
  for (const auto& n : nodes) {
    if (n.children.empty() && n.leaf_class) out.emplace(*n.leaf_class, n.id);
  }
  return out;
}

}  // namespace

Hierarchy Hierarchy::from_nodes(std::vector<HierarchyNode> nodes, NodeId root) {
  Hierarchy h;
  h.class_to_leaf_ = index_leaves(nodes);
  h.nodes_ = std::move(nodes);
  h.root_ = root;
  return h;
}

Hierarchy Hierarchy::checked(std::vector<HierarchyNode> nodes, NodeId root) {
  Hierarchy h = from_nodes(std::move(nodes), root);
  const auto problems = validate_hierarchy(h);
  if (!problems.empty()) {
    std::string msg = "invalid hierarchy:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }
  return h;
}

Hierarchy Hierarchy::from_merges(std::vector<ClassLabel> leaf_labels,
                                 std::span<const MergeStep> merges) {
  std::sort(leaf_labels.begin(), leaf_labels.end());
  if (leaf_labels.empty()) throw std::invalid_argument("no classes");
  if (std::adjacent_find(leaf_labels.begin(), leaf_labels.end()) != leaf_labels.end()) {
    throw std::invalid_argument("duplicate class label");
  }
  const auto n = static_cast<NodeId>(leaf_labels.size());
  if (merges.size() != leaf_labels.size() - 1) {
    throw std::invalid_argument("expected " + std::to_string(n - 1) + " merges, got " +
                                std::to_string(merges.size()));
  }

  std::vector<HierarchyNode> nodes;
  nodes.reserve(2 * leaf_labels.size() - 1);
  for (NodeId i = 0; i < n; ++i) {
    HierarchyNode leaf;
    leaf.id = i;
    leaf.leaf_class = leaf_labels[i];
    leaf.member_classes = {leaf_labels[i]};
    nodes.push_back(std::move(leaf));
  }

  for (const auto& m : merges) {
    const auto next = static_cast<NodeId>(nodes.size());
    for (NodeId c : {m.a, m.b}) {
      if (c < 0 || c >= next || nodes[c].parent) {
        throw std::invalid_argument("merge references inactive node " + std::to_string(c));
      }
    }
    if (m.a == m.b) throw std::invalid_argument("merge of a node with itself");
    if (!(m.distance >= 0.0) || !std::isfinite(m.distance)) {
      throw std::invalid_argument("merge distance must be finite and nonnegative");
    }
    NodeId left = m.a;
    NodeId right = m.b;
    if (nodes[right].member_classes.front() < nodes[left].member_classes.front()) {
      std::swap(left, right);
    }
    HierarchyNode parent;
    parent.id = next;
    parent.children = {left, right};
    parent.merge_distance = m.distance;
    std::merge(nodes[left].member_classes.begin(), nodes[left].member_classes.end(),
               nodes[right].member_classes.begin(), nodes[right].member_classes.end(),
               std::back_inserter(parent.member_classes));
    nodes[left].parent = next;
    nodes[right].parent = next;
    nodes.push_back(std::move(parent));
  }

  const NodeId root = static_cast<NodeId>(nodes.size()) - 1;
  // Parents always carry larger ids than their children.
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    if (it->parent) it->depth = nodes[*it->parent].depth + 1;
  }
  return checked(std::move(nodes), root);
}

bool Hierarchy::contains(NodeId id) const noexcept {
  return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
}

const HierarchyNode& Hierarchy::node(NodeId id) const {
  if (!contains(id)) throw std::invalid_argument("unknown node id " + std::to_string(id));
  return nodes_[id];
}

NodeId Hierarchy::leaf_for(const ClassLabel& label) const {
  auto it = class_to_leaf_.find(label);
  if (it == class_to_leaf_.end()) {
    throw std::invalid_argument("class '" + label + "' is not in the hierarchy");
  }
  return it->second;
}

std::vector<ClassLabel> Hierarchy::classes() const {
  std::vector<ClassLabel> out;
  out.reserve(class_to_leaf_.size());
  for (const auto& [label, id] : class_to_leaf_) out.push_back(label);
  return out;
}

std::vector<NodeId> Hierarchy::path_from_root(NodeId id) const {
  std::vector<NodeId> path;
  for (std::optional<NodeId> cur = id; cur; cur = node(*cur).parent) {
    path.push_back(*cur);
    if (path.size() > nodes_.size()) throw std::invalid_argument("parent cycle");
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool Hierarchy::is_ancestor_or_self(NodeId ancestor, NodeId descendant) const {
  const int target_depth = node(ancestor).depth;
  NodeId cur = descendant;
  while (node(cur).depth > target_depth) cur = *node(cur).parent;
  return cur == ancestor;
}

int tree_distance(const Hierarchy& h, NodeId a, NodeId b) {
  // Climb the deeper node first, then both together until they meet.
  int da = h.node(a).depth;
  int db = h.node(b).depth;
  int hops = 0;
  while (da > db) { a = *h.node(a).parent; --da; ++hops; }
  while (db > da) { b = *h.node(b).parent; --db; ++hops; }
  while (a != b) {
    a = *h.node(a).parent;
    b = *h.node(b).parent;
    hops += 2;
  }
  return hops;
}

int max_tree_distance(const Hierarchy& h, NodeId t) {
  h.node(t);
  int best = 0;
  for (const auto& n : h.nodes()) best = std::max(best, tree_distance(h, t, n.id));
  return best;
}

std::vector<std::string> validate_hierarchy(const Hierarchy& h) {
  std::vector<std::string> out;
  const auto& nodes = h.nodes();
  if (nodes.empty()) {
    out.push_back("hierarchy has no nodes");
    return out;
  }
  if (!h.contains(h.root())) {
    out.push_back("root id " + std::to_string(h.root()) + " is not a node");
    return out;
  }

  bool links_ok = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    const auto name = node_name(n.id);
    if (n.id != static_cast<NodeId>(i)) {
      out.push_back(name + ": id does not match position " + std::to_string(i));
      links_ok = false;
    }
    if (n.parent && !h.contains(*n.parent)) {
      out.push_back(name + ": parent " + std::to_string(*n.parent) + " is not a node");
      links_ok = false;
    }
    for (NodeId c : n.children) {
      if (!h.contains(c)) {
        out.push_back(name + ": child " + std::to_string(c) + " is not a node");
        links_ok = false;
      } else if (nodes[c].parent != n.id) {
        out.push_back(name + ": child " + std::to_string(c) + " does not point back");
        links_ok = false;
      }
    }
    if (!n.children.empty() && n.children.size() != 2) {
      out.push_back(name + ": internal node with " + std::to_string(n.children.size()) +
                    (n.children.size() == 1 ? " child" : " children"));
    }
    if (n.children.size() == 2 && n.children[0] == n.children[1]) {
      out.push_back(name + ": both children are the same node");
      links_ok = false;
    }
    if (n.is_leaf() && !n.leaf_class) out.push_back(name + ": leaf without a class");
    if (!n.is_leaf() && n.leaf_class) out.push_back(name + ": internal node with a leaf class");
    if (!std::is_sorted(n.member_classes.begin(), n.member_classes.end()) ||
        std::adjacent_find(n.member_classes.begin(), n.member_classes.end()) !=
            n.member_classes.end()) {
      out.push_back(name + ": member classes not sorted and distinct");
    }
    if (n.is_leaf() && n.leaf_class &&
        n.member_classes != std::vector<ClassLabel>{*n.leaf_class}) {
      out.push_back(name + ": leaf member classes must be exactly its class");
    }
    if (!std::isfinite(n.merge_distance) || n.merge_distance < 0.0) {
      out.push_back(name + ": merge distance must be finite and nonnegative");
    } else if (n.is_leaf() && n.merge_distance != 0.0) {
      out.push_back(name + ": leaf merge distance must be 0");
    }
  }

  if (nodes[h.root()].parent) out.push_back(node_name(h.root()) + ": root has a parent");
  if (nodes[h.root()].depth != 0) out.push_back(node_name(h.root()) + ": root depth must be 0");
  if (!links_ok) return out;

  // Reachability, depths and member-set unions, walking down from the root.
  std::vector<bool> seen(nodes.size(), false);
  std::deque<NodeId> queue{h.root()};
  seen[h.root()] = true;
  while (!queue.empty()) {
    const auto& n = nodes[queue.front()];
    queue.pop_front();
    for (NodeId c : n.children) {
      if (seen[c]) {
        out.push_back(node_name(c) + ": reached twice (cycle or shared child)");
        continue;
      }
      seen[c] = true;
      queue.push_back(c);
      if (nodes[c].depth != n.depth + 1) {
        out.push_back(node_name(c) + ": depth " + std::to_string(nodes[c].depth) +
                      " but parent depth is " + std::to_string(n.depth));
      }
    }
    if (n.children.size() == 2) {
      const auto& l = nodes[n.children[0]].member_classes;
      const auto& r = nodes[n.children[1]].member_classes;
      std::vector<ClassLabel> both;
      std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(both));
      std::vector<ClassLabel> joined;
      std::set_union(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(joined));
      if (!both.empty()) {
        out.push_back(node_name(n.id) + ": children share member class '" + both.front() + "'");
      }
      if (joined != n.member_classes) {
        out.push_back(node_name(n.id) + ": member classes are not the union of its children's");
      }
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!seen[i]) out.push_back(node_name(static_cast<NodeId>(i)) + ": not reachable from root");
  }

  std::set<ClassLabel> leaf_classes;
  std::size_t leaves = 0;
  for (const auto& n : nodes) {
    if (!n.is_leaf() || !n.leaf_class) continue;
    ++leaves;
    if (!leaf_classes.insert(*n.leaf_class).second) {
      out.push_back(node_name(n.id) + ": class '" + *n.leaf_class + "' has more than one leaf");
    }
  }
  if (nodes.size() != 2 * leaves - 1) {
    out.push_back("node count " + std::to_string(nodes.size()) + " != 2*leaves-1 (leaves = " +
                  std::to_string(leaves) + ")");
  }
  return out;
}

TreeDistances::TreeDistances(const Hierarchy& h) : n_(h.size()), d_(n_ * n_, 0), max_(n_, 0) {
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a + 1; b < n_; ++b) {
      const int d = tree_distance(h, static_cast<NodeId>(a), static_cast<NodeId>(b));
      d_[a * n_ + b] = d;
      d_[b * n_ + a] = d;
      max_[a] = std::max(max_[a], d);
      max_[b] = std::max(max_[b], d);
    }
  }
}

TreeDistances::TreeDistances(std::size_t n, std::vector<int> matrix)
    : n_(n), d_(std::move(matrix)), max_(n, 0) {
  if (d_.size() != n_ * n_) throw std::invalid_argument("distance matrix is not n*n");
  for (std::size_t a = 0; a < n_; ++a) {
    if (d_[a * n_ + a] != 0) throw std::invalid_argument("nonzero self distance");
    for (std::size_t b = 0; b < n_; ++b) {
      const int d = d_[a * n_ + b];
      if (d < 0 || d != d_[b * n_ + a]) {
        throw std::invalid_argument("distance matrix must be symmetric and nonnegative");
      }
      max_[a] = std::max(max_[a], d);
    }
  }
}

TreeDistances TreeDistances::path_graph(std::size_t n) {
  std::vector<int> m(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      m[a * n + b] = static_cast<int>(a > b ? a - b : b - a);
    }
  }
  return TreeDistances(n, std::move(m));
}

std::size_t robinson_foulds(const Hierarchy& a, const Hierarchy& b) {
  if (a.classes() != b.classes()) {
    throw std::invalid_argument("robinson_foulds: trees cover different classes");
  }
  auto clades = [](const Hierarchy& h) {
    std::set<std::vector<ClassLabel>> out;
    for (const auto& n : h.nodes()) {
      if (!n.is_leaf()) out.insert(n.member_classes);
    }
    return out;
  };
  const auto ca = clades(a);
  const auto cb = clades(b);
  std::vector<std::vector<ClassLabel>> diff;
  std::set_symmetric_difference(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                std::back_inserter(diff));
  return diff.size();
}

}  // namespace hosr
