#pragma once

#include <functional>

#include "treecomp/clock.hpp"
#include "treecomp/linear_system.hpp"

namespace treecomp {

struct MipProblem {
  LinearSystem system;
  RatVec objective;  // minimized
  std::vector<bool> integer_mask;
};

enum class MipStatus { optimal, infeasible, early_stop, node_limit, time_limit, unbounded };

enum class IncumbentAction {
  keep_and_stop,  // accept and end the search
  keep,           // accept, keep searching for better
  reject          // discard and exclude this integer assignment
};

struct MipParams {
  long long node_limit = 50'000;
  std::optional<double> time_limit_s;
  int reliability_threshold = 10;
  bool plunging = true;
  double integrality_tol = 1e-6;
  /// Subproblems whose LP bound exceeds this value are fathomed even
  /// without an incumbent (minimization form).
  std::optional<Rational> objective_cutoff;
};

struct MipResult {
  MipStatus status = MipStatus::infeasible;
  std::optional<RatVec> best_point;
  std::optional<Rational> best_value;
  ExtValue best_bound = ExtValue::pos_inf();  // proven bound at stop
  long long nodes = 0;
  long long rejections = 0;
};

/// Incumbent filter: called on every integral LP solution that survives
/// the bound tests. A `reject` excludes the entire integer assignment
/// (the filter must depend only on the integer variables).
using IncumbentFilter = std::function<IncumbentAction(const RatVec&, const Rational&)>;

/// Plain branch-and-bound over the LP relaxation: reliability-style
/// variable selection with pseudocosts, optional plunging, best-bound
/// queue otherwise.
MipResult mip_solve(const MipProblem& problem, const MipParams& params, const LpContext& ctx,
                    const Stopwatch* watch = nullptr, const IncumbentFilter& filter = {});

}  // namespace treecomp
