#pragma once

#include <functional>

#include "treecomp/heuristic.hpp"

namespace treecomp {

enum class CompressMethod { exact, heuristic, drop_only };

struct CompressMode {
  CompressMethod method = CompressMethod::exact;
  std::optional<int> support_limit;   // exact method only
  long long coefficient_bound = 100;  // |pi_i| <= M
  Rational delta_accept = Rational(1, 10'000);
  std::optional<double> per_node_limit_s;
  std::optional<double> global_limit_s;
  long long mip_node_limit = 50'000;
  long long heur_max_iterations = 0;  // 0 -> 10*n
};

enum class StepAction { drop, replace, skip };

struct CompressionStep {
  NodeId node = -1;
  StepAction action = StepAction::skip;
  std::optional<Disjunction> disjunction;
  double time_s = 0;
  long long size_before = 0, size_after = 0;
  ExtValue bound_before, bound_after;
  bool timed_out = false;
};

struct CompressionLog {
  std::vector<CompressionStep> steps;
  long long initial_size = 0, final_size = 0;
  ExtValue initial_bound, final_bound;
  bool hit_global_limit = false;
  double total_time_s = 0;
  std::string method;

  long long applied_steps() const {
    long long k = 0;
    for (const auto& s : steps)
      if (s.action != StepAction::skip) ++k;
    return k;
  }
  std::string to_jsonl() const;
};

/// Drop v's descendants when its own LP value already meets the tree
/// bound and the subtree actually shrinks; absent otherwise.
std::optional<BbTree> try_drop(const BbTree& tree, NodeId v);

using OrderingHook = std::function<std::vector<NodeId>(const BbTree&)>;

/// Greedy one-pass compression: walk the nodes (depth-first by default, or
/// the hook's order), drop where the node bound allows, otherwise search
/// for a replacing disjunction with the configured finder. Every applied
/// step strictly shrinks the tree and never lowers the dual bound; the
/// bound is refreshed after each applied step.
std::pair<BbTree, CompressionLog> compress_tree(const BbTree& input, const CompressMode& mode,
                                                const LpContext& ctx,
                                                const Stopwatch* watch = nullptr,
                                                const OrderingHook& ordering = {});

}  // namespace treecomp
