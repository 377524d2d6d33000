#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "treecomp/instance.hpp"

namespace treecomp {

using NodeId = long long;

struct UnknownNode : std::runtime_error {
  explicit UnknownNode(NodeId id) : std::runtime_error("unknown node " + std::to_string(id)) {}
};
struct NodeIsLeaf : std::runtime_error {
  explicit NodeIsLeaf(NodeId id)
      : std::runtime_error("node " + std::to_string(id) + " is a leaf") {}
};
struct InstanceMismatch : std::runtime_error {
  InstanceMismatch() : std::runtime_error("tree file does not match the given instance") {}
};

/// Integer branching direction pi (sparse, nonzero) with integer offset,
/// encoding the split (pi.x <= offset) v (pi.x >= offset + 1).
struct Disjunction {
  std::vector<std::pair<Index, long long>> coeffs;  // sorted by index, nonzero entries
  long long offset = 0;

  bool empty() const { return coeffs.empty(); }
  int support_size() const { return static_cast<int>(coeffs.size()); }

  Rational value_at(const RatVec& x) const {
    Rational v;
    for (const auto& [j, a] : coeffs) v += Rational(a) * x(j);
    return v;
  }

  friend bool operator==(const Disjunction& a, const Disjunction& b) {
    return a.offset == b.offset && a.coeffs == b.coeffs;
  }
};

Disjunction make_disjunction(std::vector<std::pair<Index, long long>> coeffs, long long offset);
Disjunction unit_disjunction(Index var, long long offset);

enum class Side { left, right };

/// left: pi.x <= offset; right: pi.x >= offset + 1.
struct BranchConstraint {
  Disjunction disjunction;
  Side side = Side::left;

  /// The constraint as a <= row over n variables.
  SparseRow as_row() const;

  friend bool operator==(const BranchConstraint& a, const BranchConstraint& b) {
    return a.side == b.side && a.disjunction == b.disjunction;
  }
};

struct BbNode {
  NodeId id = 0;
  NodeId parent = -1;                      // -1 at the root
  std::optional<BranchConstraint> branch;  // absent only at the root
  NodeId child_left = -1;
  NodeId child_right = -1;
  ExtValue lp_value;
  std::optional<RatVec> lp_point;

  bool is_leaf() const { return child_left < 0; }
};

/// Rooted binary BB tree. Node ids are assigned in creation order and are
/// never reused, so ascending id equals the creation log. Trees are values:
/// drop/replace return edited copies.
class BbTree {
 public:
  BbTree() = default;

  static BbTree make_root(std::shared_ptr<const Instance> instance, const LpContext& ctx);

  const Instance& instance() const { return *instance_; }
  std::shared_ptr<const Instance> instance_ptr() const { return instance_; }
  NodeId root_id() const { return root_; }
  NodeId next_id() const { return next_id_; }
  /// True while every cached lp_value came from the exact backend.
  bool values_exact() const { return values_exact_; }

  long long size() const { return static_cast<long long>(nodes_.size()); }
  bool contains(NodeId v) const { return nodes_.count(v) > 0; }
  const BbNode& node(NodeId v) const;
  const std::map<NodeId, BbNode>& nodes() const { return nodes_; }

  std::vector<NodeId> leaves() const;
  std::vector<NodeId> preorder() const;  // root first, left before right
  long long subtree_size(NodeId v) const;
  std::vector<NodeId> subtree_nodes(NodeId v) const;
  int depth(NodeId v) const;

  /// Root system plus one row per ancestor branch constraint on the
  /// path root -> v. Q(v) is always derived, never stored.
  LinearSystem node_polyhedron(NodeId v) const;

  /// min over leaves of the cached lp values, with the empty-set and
  /// unbounded conventions.
  ExtValue dual_bound() const;

  /// Re-solves a node LP with the given context and refreshes the cache.
  void revalidate_node(NodeId v, const LpContext& ctx);
  /// Re-solves every leaf LP exactly; marks the tree exact.
  void make_leaf_values_exact(const LpContext& ctx);

  /// Attaches the two children of `disjunction` to leaf v, solving and
  /// caching their LPs. Returns (left id, right id). Builder primitive used
  /// by generation and by replace.
  std::pair<NodeId, NodeId> branch_leaf(NodeId v, const Disjunction& disjunction,
                                        const LpContext& ctx);

  friend BbTree drop(const BbTree& t, NodeId v);
  friend BbTree replace(const BbTree& t, NodeId v, const Disjunction& d, const LpContext& ctx);

  /// In-place variants used by the compression loops; same semantics.
  void drop_in_place(NodeId v);
  std::pair<NodeId, NodeId> replace_in_place(NodeId v, const Disjunction& d, const LpContext& ctx);

  std::string serialize() const;
  static BbTree deserialize(const std::string& text, std::shared_ptr<const Instance> instance);

  friend bool operator==(const BbTree& a, const BbTree& b);

 private:
  std::shared_ptr<const Instance> instance_;
  std::map<NodeId, BbNode> nodes_;
  NodeId root_ = 0;
  NodeId next_id_ = 0;
  bool values_exact_ = true;

  BbNode& node_mut(NodeId v);
  void check_node(NodeId v) const;
};

BbTree drop(const BbTree& t, NodeId v);
BbTree replace(const BbTree& t, NodeId v, const Disjunction& d, const LpContext& ctx);

/// Both compression conditions for a single drop/replace step:
/// strictly smaller tree and a dual bound that did not decrease.
bool is_valid_compression_step(const BbTree& before, const BbTree& after);

}  // namespace treecomp
