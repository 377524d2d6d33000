#pragma once

#include "treecomp/compress.hpp"

namespace treecomp {

struct MissingRecord : std::runtime_error {
  explicit MissingRecord(NodeId v)
      : std::runtime_error("no record for node " + std::to_string(v)) {}
};
struct ZeroHorizon : std::runtime_error {
  ZeroHorizon() : std::runtime_error("AUC needs a finite positive horizon") {}
};

enum class RecordAction { none, drop, replace };

/// Precomputed compressibility datum for one non-leaf node, measured
/// against the original tree bound.
struct NodeRecord {
  NodeId node = -1;
  bool compressible = false;
  RecordAction action = RecordAction::none;
  std::optional<Disjunction> disjunction;
  double time_s = 0;
  long long subtree = 1;
  ExtValue bound;
  NodeId creation_index = 0;
};

enum class OrderingKind { random_shuffle, dfs, node_id, subtree_size, gap, expert };

struct Ordering {
  OrderingKind kind = OrderingKind::dfs;
  std::uint64_t seed = 0;  // random_shuffle only
};

Ordering parse_ordering(const std::string& name, std::uint64_t seed);
std::string ordering_name(OrderingKind k);

struct FinderChoice {
  CompressMethod method = CompressMethod::heuristic;  // heuristic or exact
  CompressMode mode;                                  // limits, support, M
};

/// One record per non-leaf node in creation order, all judged against the
/// tree's original dual bound. A zero per-node limit records everything as
/// incompressible with zero time. Records for nodes whose replacement
/// cannot shrink the tree (subtree - 1 <= 2 and no drop) come back
/// incompressible without running the finder.
std::vector<NodeRecord> precompute_records(const BbTree& tree, const FinderChoice& finder,
                                           std::optional<double> per_node_limit_s,
                                           const LpContext& ctx, const Stopwatch* watch = nullptr,
                                           int jobs = 1);

/// Permutation of the non-leaf nodes under the named strategy. Records are
/// required (bounds, subtree sizes, compressibility); only `expert` uses
/// the compressibility fields.
std::vector<NodeId> order_nodes(const BbTree& tree, const std::vector<NodeRecord>& records,
                                const Ordering& ordering);

/// Placeholder records carrying only structure (subtree sizes, bounds);
/// usable for every ordering except `expert`.
std::vector<NodeRecord> skeleton_records(const BbTree& tree);

struct TrajectoryStep {
  NodeId node = -1;
  double time_s = 0;
  long long size_after = 0;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  long long initial_size = 0;
  long long final_size = 0;
  std::optional<double> horizon_s;  // nullopt = unlimited
};

/// Budgeted replay of the greedy compression under a fixed node order.
/// Nodes removed by earlier actions are skipped at zero cost; surviving
/// nodes consume their recorded time; a node that would overrun the
/// horizon is not applied and ends the run. Drop and replace effects use
/// the subtree size current at application time; a replace that can no
/// longer shrink the tree is a timed no-op.
Trajectory simulate(const BbTree& tree, const std::vector<NodeRecord>& records,
                    const Ordering& ordering, std::optional<double> horizon_s);

/// 100 * sum(t_i * s_{i-1}) / (T * s0); lower is better. The optional
/// terminal segment adds (T - sum t_i) * s_n to the numerator.
double auc_percent(const Trajectory& traj, bool terminal_segment = false);

/// 100 * (1 - s_final / s0).
double compression_ratio_percent(long long s0, long long s_final);

std::string records_to_jsonl(const std::vector<NodeRecord>& records);
std::vector<NodeRecord> records_from_jsonl(const std::string& text);

}  // namespace treecomp
