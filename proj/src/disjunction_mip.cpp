#include "treecomp/disjunction_mip.hpp"

namespace treecomp {

std::pair<ExtValue, ExtValue> disjunction_side_values(const LinearSystem& q, const RatVec& c,
                                                      const Disjunction& dj, const LpContext& ctx) {
  ExtValue vals[2];
  for (Side side : {Side::left, Side::right}) {
    LinearSystem sys = q;
    sys.add_row(BranchConstraint{dj, side}.as_row());
    vals[side == Side::left ? 0 : 1] = lp_solve(sys, c, ctx).objective_bound();
  }
  return {vals[0], vals[1]};
}

bool disjunction_preserves_bound(const LinearSystem& q, const RatVec& c, const Disjunction& dj,
                                 const ExtValue& d, const LpContext& ctx) {
  auto [left, right] = disjunction_side_values(q, c, dj, ctx.with_backend(Backend::exact));
  return left >= d && right >= d;
}

namespace {

// One >=-form row of the closure of Q: coeffs.x >= rhs.
struct GeRow {
  std::vector<std::pair<Index, Rational>> coeffs;
  Rational rhs;
};

std::vector<GeRow> ge_closure(const LinearSystem& q) {
  std::vector<GeRow> rows;
  for (const auto& row : q.rows) {
    GeRow r;
    for (const auto& [j, a] : row.coeffs) r.coeffs.emplace_back(j, -a);
    r.rhs = -row.rhs;
    rows.push_back(std::move(r));
  }
  for (Index j = 0; j < q.num_vars; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (q.lower[ju].is_finite())
      rows.push_back(GeRow{{{j, Rational(1)}}, q.lower[ju].finite()});
    if (q.upper[ju].is_finite())
      rows.push_back(GeRow{{{j, Rational(-1)}}, -q.upper[ju].finite()});
  }
  return rows;
}

// Range of x_i over Q, from the bounds when finite, else by two LPs.
std::optional<std::pair<Rational, Rational>> var_range(const LinearSystem& q, Index i,
                                                       const LpContext& ctx) {
  const auto iu = static_cast<std::size_t>(i);
  Rational lo, hi;
  bool lo_ok = false, hi_ok = false;
  if (q.lower[iu].is_finite()) {
    lo = q.lower[iu].finite();
    lo_ok = true;
  }
  if (q.upper[iu].is_finite()) {
    hi = q.upper[iu].finite();
    hi_ok = true;
  }
  if (!lo_ok || !hi_ok) {
    RatVec c(q.num_vars);
    for (Index j = 0; j < q.num_vars; ++j) c(j) = Rational(0);
    if (!lo_ok) {
      c(i) = Rational(1);
      auto res = lp_solve(q, c, ctx);
      if (res.status != LpStatus::optimal) return std::nullopt;
      lo = res.value;
    }
    if (!hi_ok) {
      c(i) = Rational(-1);
      auto res = lp_solve(q, c, ctx);
      if (res.status != LpStatus::optimal) return std::nullopt;
      hi = -res.value;
    }
  }
  return std::make_pair(lo, hi);
}

struct ModelLayout {
  Index n_rows = 0;  // >= -form closure rows
  Index n_masked = 0;
  std::vector<Index> masked_vars;
  bool support = false;

  Index p(Index r) const { return r; }
  Index q(Index r) const { return n_rows + r; }
  Index s_l() const { return 2 * n_rows; }
  Index s_r() const { return 2 * n_rows + 1; }
  Index delta() const { return 2 * n_rows + 2; }
  Index pi(Index k) const { return 2 * n_rows + 3 + k; }
  Index pi0() const { return 2 * n_rows + 3 + n_masked; }
  Index z(Index k) const { return 2 * n_rows + 4 + n_masked + k; }
  Index total() const { return 2 * n_rows + 4 + n_masked + (support ? n_masked : 0); }
};

}  // namespace

DisjunctionSearchOutcome find_disjunction_exact(const LinearSystem& q, const RatVec& c,
                                                const ExtValue& d,
                                                const std::vector<bool>& integer_mask,
                                                const DisjunctionMipConfig& cfg,
                                                const LpContext& ctx, const Stopwatch* watch) {
  DisjunctionSearchOutcome out;
  if (d.is_neg_inf()) return out;  // bound condition vacuous; nothing to gain

  ModelLayout L;
  for (Index j = 0; j < q.num_vars; ++j)
    if (integer_mask[static_cast<std::size_t>(j)]) L.masked_vars.push_back(j);
  L.n_masked = static_cast<Index>(L.masked_vars.size());
  if (L.n_masked == 0) return out;
  L.support = cfg.support_limit.has_value();

  const LpContext exact = ctx.with_backend(Backend::exact);
  const auto rows = ge_closure(q);
  L.n_rows = static_cast<Index>(rows.size());

  // Offset window: integer pi0 outside [floor(min pi.x)-1, ceil(max pi.x)]
  // leaves one side equal to Q itself, which cannot preserve the bound.
  std::vector<std::pair<Rational, Rational>> ranges;
  for (Index k = 0; k < L.n_masked; ++k) {
    auto r = var_range(q, L.masked_vars[static_cast<std::size_t>(k)], exact);
    if (!r) {
      out.unbounded_offset_range = true;
      return out;
    }
    ranges.push_back(*r);
  }

  auto build = [&](long long M) {
    MipProblem mp;
    LinearSystem& sys = mp.system;
    sys.num_vars = L.total();
    sys.lower.assign(static_cast<std::size_t>(sys.num_vars), ExtValue::of(Rational(0)));
    sys.upper.assign(static_cast<std::size_t>(sys.num_vars), ExtValue::pos_inf());
    const bool farkas_mode = d.is_pos_inf();
    if (farkas_mode) {
      sys.upper[static_cast<std::size_t>(L.s_l())] = ExtValue::of(Rational(0));
      sys.upper[static_cast<std::size_t>(L.s_r())] = ExtValue::of(Rational(0));
    }
    sys.lower[static_cast<std::size_t>(L.delta())] = ExtValue::neg_inf();
    sys.upper[static_cast<std::size_t>(L.delta())] = ExtValue::of(Rational(1));
    Rational off_lo, off_hi;
    for (Index k = 0; k < L.n_masked; ++k) {
      sys.lower[static_cast<std::size_t>(L.pi(k))] = ExtValue::of(Rational(-M));
      sys.upper[static_cast<std::size_t>(L.pi(k))] = ExtValue::of(Rational(M));
      const auto& [vlo, vhi] = ranges[static_cast<std::size_t>(k)];
      const Rational mM(M);
      Rational cands[4] = {mM * vlo, mM * vhi, -mM * vlo, -mM * vhi};
      Rational cmin = cands[0], cmax = cands[0];
      for (const auto& cv : cands) {
        if (cv < cmin) cmin = cv;
        if (cv > cmax) cmax = cv;
      }
      off_lo += cmin;
      off_hi += cmax;
    }
    sys.lower[static_cast<std::size_t>(L.pi0())] = ExtValue::of(off_lo.floor() - Rational(1));
    sys.upper[static_cast<std::size_t>(L.pi0())] = ExtValue::of(off_hi.ceil());
    if (L.support) {
      for (Index k = 0; k < L.n_masked; ++k) {
        sys.lower[static_cast<std::size_t>(L.z(k))] = ExtValue::of(Rational(0));
        sys.upper[static_cast<std::size_t>(L.z(k))] = ExtValue::of(Rational(1));
      }
    }

    // Column view of the closure rows.
    auto add_eq_pair = [&](std::vector<std::pair<Index, Rational>> coeffs) {
      bool nonzero = false;
      for (const auto& [idx, v] : coeffs)
        if (!v.is_zero()) nonzero = true;
      if (!nonzero) return;
      std::vector<std::pair<Index, Rational>> neg;
      neg.reserve(coeffs.size());
      for (const auto& [idx, v] : coeffs) neg.emplace_back(idx, -v);
      sys.add_row(make_row(std::move(coeffs), Rational(0)));
      sys.add_row(make_row(std::move(neg), Rational(0)));
    };

    for (Index i = 0; i < q.num_vars; ++i) {
      Index k = -1;
      for (Index kk = 0; kk < L.n_masked; ++kk)
        if (L.masked_vars[static_cast<std::size_t>(kk)] == i) k = kk;
      // sum_r A'[r][i] p_r - c_i s_L - pi_i = 0
      std::vector<std::pair<Index, Rational>> eq_l, eq_r;
      for (Index r = 0; r < L.n_rows; ++r) {
        for (const auto& [idx, v] : rows[static_cast<std::size_t>(r)].coeffs) {
          if (idx != i) continue;
          eq_l.emplace_back(L.p(r), v);
          eq_r.emplace_back(L.q(r), v);
        }
      }
      if (!c(i).is_zero()) {
        eq_l.emplace_back(L.s_l(), -c(i));
        eq_r.emplace_back(L.s_r(), -c(i));
      }
      if (k >= 0) {
        eq_l.emplace_back(L.pi(k), Rational(-1));
        eq_r.emplace_back(L.pi(k), Rational(1));
      }
      add_eq_pair(std::move(eq_l));
      add_eq_pair(std::move(eq_r));
    }

    // p.b' - d s_L - pi0 >= delta   ->  -p.b' + d s_L + pi0 + delta <= 0
    // q.b' - d s_R + pi0 >= delta-1 ->  -q.b' + d s_R - pi0 + delta <= 1
    {
      std::vector<std::pair<Index, Rational>> le_l, le_r;
      for (Index r = 0; r < L.n_rows; ++r) {
        const Rational& br = rows[static_cast<std::size_t>(r)].rhs;
        if (br.is_zero()) continue;
        le_l.emplace_back(L.p(r), -br);
        le_r.emplace_back(L.q(r), -br);
      }
      if (!farkas_mode && !d.finite().is_zero()) {
        le_l.emplace_back(L.s_l(), d.finite());
        le_r.emplace_back(L.s_r(), d.finite());
      }
      le_l.emplace_back(L.pi0(), Rational(1));
      le_r.emplace_back(L.pi0(), Rational(-1));
      le_l.emplace_back(L.delta(), Rational(1));
      le_r.emplace_back(L.delta(), Rational(1));
      sys.add_row(make_row(std::move(le_l), Rational(0)));
      sys.add_row(make_row(std::move(le_r), Rational(1)));
    }

    if (L.support) {
      for (Index k = 0; k < L.n_masked; ++k) {
        sys.add_row(make_row({{L.pi(k), Rational(1)}, {L.z(k), Rational(-M)}}, Rational(0)));
        sys.add_row(make_row({{L.pi(k), Rational(-1)}, {L.z(k), Rational(-M)}}, Rational(0)));
      }
      std::vector<std::pair<Index, Rational>> sum_z, min_z;
      for (Index k = 0; k < L.n_masked; ++k) {
        sum_z.emplace_back(L.z(k), Rational(1));
        min_z.emplace_back(L.z(k), Rational(-1));
      }
      sys.add_row(make_row(std::move(sum_z), Rational(*cfg.support_limit)));
      sys.add_row(make_row(std::move(min_z), Rational(-1)));  // at least one coefficient
    }

    mp.objective.setConstant(L.total(), Rational(0));
    mp.objective(L.delta()) = Rational(-1);  // maximize delta
    mp.integer_mask.assign(static_cast<std::size_t>(L.total()), false);
    for (Index k = 0; k < L.n_masked; ++k) {
      mp.integer_mask[static_cast<std::size_t>(L.pi(k))] = true;
      if (L.support) mp.integer_mask[static_cast<std::size_t>(L.z(k))] = true;
    }
    mp.integer_mask[static_cast<std::size_t>(L.pi0())] = true;
    return mp;
  };

  auto extract = [&](const RatVec& x) {
    std::vector<std::pair<Index, long long>> coeffs;
    for (Index k = 0; k < L.n_masked; ++k) {
      const long long v = (x(L.pi(k)) + Rational(1, 2)).floor_ll();
      if (v != 0) coeffs.emplace_back(L.masked_vars[static_cast<std::size_t>(k)], v);
    }
    const long long off = (x(L.pi0()) + Rational(1, 2)).floor_ll();
    return std::make_pair(std::move(coeffs), off);
  };

  // Iterative deepening on the coefficient magnitude.
  std::vector<long long> rounds;
  for (long long m = 1; m < cfg.coefficient_bound; m *= 2) rounds.push_back(m);
  rounds.push_back(cfg.coefficient_bound);

  long long nodes_left = cfg.node_limit;
  for (long long M : rounds) {
    MipProblem mp = build(M);
    MipParams params;
    params.node_limit = nodes_left;
    params.time_limit_s = cfg.deadline_s;
    params.objective_cutoff = Rational(0);  // only margins delta >= 0 are acceptable
    std::optional<Disjunction> verified;
    std::optional<Rational> verified_delta;
    auto filter = [&](const RatVec& x, const Rational& value) {
      auto [coeffs, off] = extract(x);
      if (coeffs.empty()) return IncumbentAction::reject;
      Disjunction dj{std::move(coeffs), off};
      if (!disjunction_preserves_bound(q, c, dj, d, exact)) return IncumbentAction::reject;
      verified = std::move(dj);
      verified_delta = -value;
      return IncumbentAction::keep_and_stop;
    };
    auto res = mip_solve(mp, params, exact, watch, filter);
    out.nodes += res.nodes;
    out.rejections += res.rejections;
    nodes_left -= res.nodes;
    if (res.status == MipStatus::early_stop && verified) {
      out.found = std::move(verified);
      out.delta = verified_delta;
      return out;
    }
    if (res.status == MipStatus::time_limit) {
      out.timed_out = true;
      return out;
    }
    if (res.status == MipStatus::node_limit || nodes_left <= 0) {
      out.hit_node_limit = true;
      return out;
    }
  }
  return out;
}

}  // namespace treecomp
