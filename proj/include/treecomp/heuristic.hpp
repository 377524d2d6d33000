#pragma once

#include "treecomp/disjunction_mip.hpp"

namespace treecomp {

struct HeuristicConfig {
  long long max_iterations = 0;  // 0 means 10*n, fixed at call time
  long long coefficient_cap = 100;
  std::optional<double> deadline_s;  // absolute on the supplied stopwatch
};

struct HeuristicOutcome {
  std::optional<Disjunction> found;
  bool timed_out = false;
  int iterations = 0;  // adopted coefficient changes
  long long lp_solves = 0;
};

/// Local search for a replacing disjunction: start from the best single
/// variable direction at the node optimum, then repeatedly re-solve the
/// weaker side and adjust one coefficient at a time toward the fractional
/// components seen there, adopting the first strict improvement. The
/// result is returned only when its score reaches d and the two exact
/// side LPs confirm it.
HeuristicOutcome find_disjunction_heuristic(const LinearSystem& q, const RatVec& c,
                                            const ExtValue& d, const std::vector<bool>& mask,
                                            const HeuristicConfig& cfg, const LpContext& ctx,
                                            const Stopwatch* watch = nullptr);

}  // namespace treecomp
