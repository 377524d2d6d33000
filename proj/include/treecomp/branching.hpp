#pragma once

#include <cstdint>
#include <set>

#include "treecomp/tree.hpp"

namespace treecomp {

struct RootUnbounded : std::runtime_error {
  RootUnbounded() : std::runtime_error("objective unbounded over the root relaxation") {}
};
struct NoIntegerVariables : std::runtime_error {
  NoIntegerVariables() : std::runtime_error("instance has no integer variables") {}
};
struct NodeNotLeaf : std::runtime_error {
  explicit NodeNotLeaf(NodeId v) : std::runtime_error("node " + std::to_string(v) + " is not a leaf") {}
};
struct NodeInfeasible : std::runtime_error {
  explicit NodeInfeasible(NodeId v)
      : std::runtime_error("node " + std::to_string(v) + " has no LP point") {}
};

enum class BranchRule { fsb, rb };

struct BranchingConfig {
  BranchRule rule = BranchRule::fsb;
  bool plunging = false;
  int reliability_threshold = 10;  // 0 disables strong branching entirely
  long long node_limit = 10'000;
  double integrality_tol = 1e-6;
  bool prune_uses_incumbent = true;

  void validate() const {
    if (reliability_threshold < 0) throw std::invalid_argument("reliability_threshold < 0");
    if (node_limit < 1) throw std::invalid_argument("node_limit < 1");
  }
};

/// Per-variable branching history: per-unit objective degradations from
/// strong-branching evaluations, clamped at zero.
struct PseudocostTable {
  std::vector<Rational> up_sum, down_sum;
  std::vector<long> up_count, down_count;

  explicit PseudocostTable(Index n = 0)
      : up_sum(static_cast<std::size_t>(n)),
        down_sum(static_cast<std::size_t>(n)),
        up_count(static_cast<std::size_t>(n), 0),
        down_count(static_cast<std::size_t>(n), 0) {}

  bool reliable(Index j, int threshold) const {
    const auto ju = static_cast<std::size_t>(j);
    return std::min(up_count[ju], down_count[ju]) >= threshold;
  }
  Rational down_avg(Index j) const {
    const auto ju = static_cast<std::size_t>(j);
    return down_count[ju] == 0 ? Rational(1) : down_sum[ju] / Rational(down_count[ju]);
  }
  Rational up_avg(Index j) const {
    const auto ju = static_cast<std::size_t>(j);
    return up_count[ju] == 0 ? Rational(1) : up_sum[ju] / Rational(up_count[ju]);
  }
};

struct StrongScore {
  Index var = -1;
  ExtValue left;   // LP value of Q(v) & {x_var <= floor}
  ExtValue right;  // LP value of Q(v) & {x_var >= floor+1}
};

struct GenerationLog {
  struct Entry {
    NodeId node = -1;
    Index branch_var = -1;
    int candidates = 0;
    int sb_evaluations = 0;        // strong-branching evaluations at this node
    int pseudocost_estimates = 0;  // candidates scored from the table instead
  };
  std::vector<Entry> entries;
  long long sb_evaluations = 0;
  long long sb_lp_solves = 0;
  long long nodes_created = 1;
  std::string rule;
  bool plunging = false;
  std::uint64_t seed = 0;
  bool hit_node_limit = false;

  std::string to_json() const;
};

/// Integer variables fractional at the node's cached LP point.
std::vector<Index> fractional_candidates(const BbTree& tree, NodeId v, double integrality_tol);

/// Two LP evaluations per candidate on the floor/ceil split at v's point.
/// v must be a leaf with a cached finite LP point.
std::vector<StrongScore> strong_branch_scores(const BbTree& tree, NodeId v,
                                              const std::vector<Index>& candidates,
                                              const LpContext& ctx);

/// Reliability selection: strong-branch the unreliable candidates (updating
/// the table), score reliable ones from pseudocosts, pick the best.
Index rb_select_variable(const BbTree& tree, NodeId v, PseudocostTable& pseudocosts,
                         const BranchingConfig& config, const LpContext& ctx,
                         GenerationLog::Entry* log_entry = nullptr);

struct GenerationResult {
  BbTree tree;
  GenerationLog log;
};

/// Builds a BB tree: FSB with best-bound selection, or RB with optional
/// plunging. Leaves close on infeasibility, integrality, or an LP value at
/// or above the supplied incumbent. Stops at the node limit or completion.
GenerationResult generate_tree(std::shared_ptr<const Instance> instance,
                               const BranchingConfig& config, std::uint64_t seed,
                               const LpContext& ctx);

}  // namespace treecomp
