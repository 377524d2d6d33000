#include "treecomp/heuristic.hpp"

namespace treecomp {

namespace {

// Fractionality with a tiny symmetric guard so float-backend points
// classify the same way as exact ones.
bool is_frac(const Rational& x) {
  static const Rational tol = Rational(1, 1'000'000'000);
  const Rational f = x - x.floor();
  return f > tol && f < Rational(1) - tol;
}

struct Scored {
  Disjunction dj;
  ExtValue left, right;
  ExtValue score() const { return min(left, right); }
};

}  // namespace

HeuristicOutcome find_disjunction_heuristic(const LinearSystem& q, const RatVec& c,
                                            const ExtValue& d, const std::vector<bool>& mask,
                                            const HeuristicConfig& cfg, const LpContext& ctx,
                                            const Stopwatch* watch) {
  HeuristicOutcome out;
  Budget budget{cfg.deadline_s, watch};
  auto solve_count = [&](const LinearSystem& sys) {
    ++out.lp_solves;
    return lp_solve(sys, c, ctx);
  };

  auto root = solve_count(q);
  if (root.status != LpStatus::optimal) return out;  // nothing to anchor the offsets to
  const RatVec xstar = root.point;

  std::vector<Index> candidates;
  for (Index j = 0; j < q.num_vars; ++j) {
    if (!mask[static_cast<std::size_t>(j)]) continue;
    if (is_frac(xstar(j))) candidates.push_back(j);
  }
  if (candidates.empty()) return out;

  auto score_direction = [&](const Disjunction& dj) {
    Scored s;
    s.dj = dj;
    for (Side side : {Side::left, Side::right}) {
      LinearSystem sys = q;
      sys.add_row(BranchConstraint{dj, side}.as_row());
      auto res = solve_count(sys);
      (side == Side::left ? s.left : s.right) = res.objective_bound();
    }
    return s;
  };

  // (a) best single-variable direction at the node optimum.
  std::optional<Scored> current;
  for (Index j : candidates) {
    if (budget.exhausted()) {
      out.timed_out = true;
      return out;
    }
    Scored s = score_direction(unit_disjunction(j, xstar(j).floor_ll()));
    if (!current || s.score() > current->score()) current = std::move(s);
  }

  const long long max_iter = cfg.max_iterations > 0 ? cfg.max_iterations : 10 * q.num_vars;
  while (out.iterations < max_iter && !budget.exhausted()) {
    // (b) re-solve the weaker side (ties go left) for a fractional point.
    const bool left_weak = !(current->right < current->left);
    const ExtValue weak_value = left_weak ? current->left : current->right;
    if (weak_value.is_pos_inf()) break;  // both sides empty; no repair target
    LinearSystem weak = q;
    weak.add_row(
        BranchConstraint{current->dj, left_weak ? Side::left : Side::right}.as_row());
    auto weak_res = solve_count(weak);
    if (weak_res.status != LpStatus::optimal) break;
    const RatVec& xbar = weak_res.point;

    // (c)/(d) first strictly improving one-coefficient change wins.
    bool improved = false;
    for (Index j = 0; j < q.num_vars && !improved; ++j) {
      if (!mask[static_cast<std::size_t>(j)]) continue;
      if (!is_frac(xbar(j))) continue;
      for (int delta : {+1, -1}) {
        if (budget.exhausted()) {
          out.timed_out = true;
          break;
        }
        std::vector<std::pair<Index, long long>> coeffs = current->dj.coeffs;
        bool touched = false;
        for (auto& [idx, a] : coeffs) {
          if (idx == j) {
            a += delta;
            touched = true;
            break;
          }
        }
        if (!touched) coeffs.emplace_back(j, delta);
        std::vector<std::pair<Index, long long>> clean;
        for (const auto& [idx, a] : coeffs) {
          if (a == 0) continue;
          if (a > cfg.coefficient_cap || a < -cfg.coefficient_cap) {
            clean.clear();
            break;
          }
          clean.emplace_back(idx, a);
        }
        if (clean.empty()) continue;
        Disjunction next = make_disjunction(std::move(clean), 0);
        const Rational anchor = next.value_at(xstar);
        if (!is_frac(anchor)) continue;  // degenerate strip for this direction
        next.offset = anchor.floor_ll();
        Scored s = score_direction(next);
        if (s.score() > current->score()) {
          current = std::move(s);
          ++out.iterations;
          improved = true;
          break;
        }
      }
    }
    if (out.timed_out || !improved) break;
  }

  if (budget.exhausted()) out.timed_out = true;
  if (!(current->score() >= d)) return out;
  if (!disjunction_preserves_bound(q, c, current->dj, d, ctx)) return out;
  out.found = current->dj;
  return out;
}

}  // namespace treecomp
