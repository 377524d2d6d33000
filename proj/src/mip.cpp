#include "treecomp/mip.hpp"

#include <deque>
#include <map>
#include <set>

namespace treecomp {

namespace {

struct Sub {
  long long id = 0;
  std::vector<ExtValue> lower, upper;
  ExtValue bound;     // LP value (known after solve)
  ExtValue estimate;  // queue priority key
  RatVec point;
  bool solved = false;
};

// Nearest integer; the input is integral up to the integrality tolerance.
Rational round_nearest(const Rational& x) { return (x + Rational(1, 2)).floor(); }

bool is_fractional_tol(const Rational& x, const Rational& tol) {
  const Rational f = x - x.floor();
  return f > tol && f < Rational(1) - tol;
}

struct PcEntry {
  Rational up_sum, down_sum;
  long up_count = 0, down_count = 0;
};

}  // namespace

MipResult mip_solve(const MipProblem& problem, const MipParams& params, const LpContext& ctx,
                    const Stopwatch* watch, const IncumbentFilter& filter) {
  problem.system.validate();
  const Index n = problem.system.num_vars;
  if (problem.objective.size() != n || problem.integer_mask.size() != static_cast<std::size_t>(n))
    throw DimensionMismatch("mip_solve: inconsistent problem");
  const Rational tol = Rational::from_double(params.integrality_tol);
  Budget budget{params.time_limit_s, watch};

  MipResult res;
  std::vector<Index> int_vars;
  for (Index j = 0; j < n; ++j)
    if (problem.integer_mask[static_cast<std::size_t>(j)]) int_vars.push_back(j);

  std::map<long long, Sub> store;
  std::set<std::pair<ExtValue, long long>> queue;  // (bound estimate, id)
  long long next_id = 0;

  auto push = [&](Sub sub, ExtValue estimate) {
    sub.id = next_id++;
    sub.estimate = estimate;
    queue.emplace(std::move(estimate), sub.id);
    const long long id = sub.id;
    store.emplace(id, std::move(sub));
  };

  auto solve_sub = [&](Sub& sub) {
    LinearSystem sys = problem.system;
    sys.lower = sub.lower;
    sys.upper = sub.upper;
    auto lp = lp_solve(sys, problem.objective, ctx);
    sub.solved = true;
    sub.bound = lp.objective_bound();
    if (lp.status == LpStatus::optimal) sub.point = lp.point;
    ++res.nodes;
  };

  std::optional<Rational> incumbent_value;
  std::optional<RatVec> incumbent_point;
  std::vector<PcEntry> pc(static_cast<std::size_t>(n));

  auto fathomed = [&](const ExtValue& bound) {
    if (bound.is_pos_inf()) return true;
    if (incumbent_value && bound >= ExtValue::of(*incumbent_value)) return true;
    if (params.objective_cutoff && bound > ExtValue::of(*params.objective_cutoff)) return true;
    return false;
  };

  {
    Sub root;
    root.lower = problem.system.lower;
    root.upper = problem.system.upper;
    push(std::move(root), ExtValue::neg_inf());
  }

  std::deque<long long> plunge_next;
  MipStatus stop_status = MipStatus::optimal;
  bool stopped = false;

  auto side_value = [&](const Sub& sub, Index j, long long off, bool left) {
    LinearSystem sys = problem.system;
    sys.lower = sub.lower;
    sys.upper = sub.upper;
    const auto ju = static_cast<std::size_t>(j);
    if (left)
      sys.upper[ju] = ExtValue::of(Rational(off));
    else
      sys.lower[ju] = ExtValue::of(Rational(off + 1));
    return lp_solve(sys, problem.objective, ctx).objective_bound();
  };

  while (!queue.empty()) {
    if (budget.exhausted()) {
      stop_status = MipStatus::time_limit;
      stopped = true;
      break;
    }
    if (res.nodes >= params.node_limit) {
      stop_status = MipStatus::node_limit;
      stopped = true;
      break;
    }
    long long id = -1;
    if (params.plunging) {
      while (!plunge_next.empty()) {
        long long cand = plunge_next.front();
        plunge_next.pop_front();
        if (store.count(cand)) {
          id = cand;
          break;
        }
      }
    }
    if (id < 0) id = queue.begin()->second;
    Sub sub = std::move(store.at(id));
    store.erase(id);
    queue.erase({sub.estimate, id});

    if (!sub.solved) solve_sub(sub);
    if (fathomed(sub.bound)) continue;

    // Fractional integer variables at the subproblem optimum.
    std::vector<Index> cands;
    for (Index j : int_vars)
      if (is_fractional_tol(sub.point(j), tol)) cands.push_back(j);

    if (cands.empty()) {
      // Integral incumbent candidate.
      const Rational value = sub.bound.finite();
      IncumbentAction action = IncumbentAction::keep;
      if (filter) action = filter(sub.point, value);
      if (action == IncumbentAction::reject) {
        ++res.rejections;
        // Exclude the whole integer assignment by splitting around it.
        for (std::size_t k = 0; k < int_vars.size(); ++k) {
          const Index var = int_vars[k];
          const Rational pk = round_nearest(sub.point(var));
          for (int side = 0; side < 2; ++side) {
            Sub child;
            child.lower = sub.lower;
            child.upper = sub.upper;
            for (std::size_t h = 0; h < k; ++h) {
              const Index fix = int_vars[h];
              const auto fu = static_cast<std::size_t>(fix);
              child.lower[fu] = ExtValue::of(round_nearest(sub.point(fix)));
              child.upper[fu] = child.lower[fu];
            }
            const auto vu = static_cast<std::size_t>(var);
            if (side == 0) {
              const ExtValue cap = ExtValue::of(pk - Rational(1));
              if (child.lower[vu].is_finite() && child.lower[vu] > cap) continue;
              child.upper[vu] = min(child.upper[vu], cap);
            } else {
              const ExtValue floor_up = ExtValue::of(pk + Rational(1));
              if (child.upper[vu].is_finite() && child.upper[vu] < floor_up) continue;
              child.lower[vu] = max(child.lower[vu], floor_up);
            }
            push(std::move(child), sub.bound);
          }
        }
        continue;
      }
      if (!incumbent_value || value < *incumbent_value) {
        incumbent_value = value;
        incumbent_point = sub.point;
      }
      if (action == IncumbentAction::keep_and_stop) {
        stop_status = MipStatus::early_stop;
        stopped = true;
        break;
      }
      continue;
    }

    // Variable selection: strong evaluation while unreliable, pseudocost
    // estimates afterwards; highest min-side score wins, ties to the
    // lowest index.
    Index best_var = -1;
    ExtValue best_primary = ExtValue::neg_inf();
    ExtValue best_secondary = ExtValue::neg_inf();
    for (Index j : cands) {
      const auto ju = static_cast<std::size_t>(j);
      const Rational frac = sub.point(j) - sub.point(j).floor();
      ExtValue primary, secondary;
      if (std::min(pc[ju].up_count, pc[ju].down_count) < params.reliability_threshold) {
        const long long off = sub.point(j).floor_ll();
        const ExtValue left = side_value(sub, j, off, true);
        const ExtValue right = side_value(sub, j, off, false);
        pc[ju].down_count += 1;
        pc[ju].up_count += 1;
        if (left.is_finite() && !frac.is_zero()) {
          Rational per = (left.finite() - sub.bound.finite()) / frac;
          if (per.sign() < 0) per = Rational(0);
          pc[ju].down_sum += per;
        }
        const Rational ufrac = Rational(1) - frac;
        if (right.is_finite() && !ufrac.is_zero()) {
          Rational per = (right.finite() - sub.bound.finite()) / ufrac;
          if (per.sign() < 0) per = Rational(0);
          pc[ju].up_sum += per;
        }
        primary = min(left, right);
        secondary = max(left, right);
      } else {
        const Rational davg =
            pc[ju].down_count ? pc[ju].down_sum / Rational(pc[ju].down_count) : Rational(1);
        const Rational uavg = pc[ju].up_count ? pc[ju].up_sum / Rational(pc[ju].up_count) : Rational(1);
        const ExtValue d_est = ExtValue::of(sub.bound.finite() + davg * frac);
        const ExtValue u_est = ExtValue::of(sub.bound.finite() + uavg * (Rational(1) - frac));
        primary = min(d_est, u_est);
        secondary = max(d_est, u_est);
      }
      if (best_var < 0 || primary > best_primary ||
          (primary == best_primary && secondary > best_secondary)) {
        best_var = j;
        best_primary = primary;
        best_secondary = secondary;
      }
    }

    const long long off = sub.point(best_var).floor_ll();
    const auto bu = static_cast<std::size_t>(best_var);
    std::vector<std::pair<ExtValue, long long>> children;
    for (int side = 0; side < 2; ++side) {
      Sub child;
      child.lower = sub.lower;
      child.upper = sub.upper;
      if (side == 0)
        child.upper[bu] = ExtValue::of(Rational(off));
      else
        child.lower[bu] = ExtValue::of(Rational(off + 1));
      solve_sub(child);
      if (fathomed(child.bound)) continue;
      const ExtValue child_bound = child.bound;
      children.emplace_back(child_bound, next_id);
      push(std::move(child), child_bound);
    }
    if (params.plunging && !children.empty()) {
      // Prefer the child with the smaller bound; ties go left (created first).
      std::stable_sort(children.begin(), children.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      plunge_next.clear();
      for (const auto& [b, cid] : children) plunge_next.push_back(cid);
    }
  }

  if (!stopped && queue.empty()) {
    stop_status = incumbent_value ? MipStatus::optimal : MipStatus::infeasible;
  }
  res.status = stop_status;
  res.best_value = incumbent_value;
  res.best_point = incumbent_point;
  // Proven bound: min over the remaining open estimates and the incumbent.
  ExtValue open_bound = ExtValue::pos_inf();
  for (const auto& [est, id] : queue) {
    const Sub& s = store.at(id);
    const ExtValue b = s.solved ? s.bound : est;
    if (b < open_bound) open_bound = b;
  }
  res.best_bound = open_bound;
  if (incumbent_value && ExtValue::of(*incumbent_value) < res.best_bound)
    res.best_bound = ExtValue::of(*incumbent_value);
  return res;
}

}  // namespace treecomp
