#include "treecomp/lp.hpp"

namespace treecomp {

namespace {

LpResult solve_box_only(const LinearSystem& sys, const RatVec& c) {
  // No rows: optimize each coordinate against its bounds directly.
  LpResult res;
  res.dual_rows.resize(0);
  res.farkas.resize(0);
  if (sys.box_empty()) {
    res.status = LpStatus::infeasible;
    return res;
  }
  const Index n = sys.num_vars;
  RatVec x(n);
  for (Index j = 0; j < n; ++j) {
    const int s = c(j).sign();
    const ExtValue& lo = sys.lower[static_cast<std::size_t>(j)];
    const ExtValue& hi = sys.upper[static_cast<std::size_t>(j)];
    if (s > 0) {
      if (!lo.is_finite()) {
        res.status = LpStatus::unbounded;
        res.ray.setConstant(n, Rational(0));
        res.ray(j) = Rational(-1);
        return res;
      }
      x(j) = lo.finite();
    } else if (s < 0) {
      if (!hi.is_finite()) {
        res.status = LpStatus::unbounded;
        res.ray.setConstant(n, Rational(0));
        res.ray(j) = Rational(1);
        return res;
      }
      x(j) = hi.finite();
    } else {
      x(j) = lo.is_finite() ? lo.finite() : (hi.is_finite() ? hi.finite() : Rational(0));
    }
  }
  res.status = LpStatus::optimal;
  res.point = x;
  res.value = dot(c, x);
  res.reduced_costs = c;
  return res;
}

template <class S>
LpResult run_backend(const LinearSystem& sys, const RatVec& c, const LpParams& params,
                     SimplexEps<S> eps);

template <>
LpResult run_backend<Rational>(const LinearSystem& sys, const RatVec& c, const LpParams& params,
                               SimplexEps<Rational> eps) {
  auto p = detail::to_simplex_problem<Rational>(sys, c);
  Simplex<Rational> engine(p, eps, params.max_iterations);
  auto out = engine.solve();
  LpResult res;
  res.iterations = out.iterations;
  res.produced_by = Backend::exact;
  switch (out.status) {
    case SimplexStatus::optimal:
      res.status = LpStatus::optimal;
      res.value = out.objective;
      res.point = out.x;
      res.dual_rows = out.dual_rows;
      res.reduced_costs = out.red_costs;
      break;
    case SimplexStatus::infeasible:
      res.status = LpStatus::infeasible;
      res.farkas = out.farkas;
      break;
    case SimplexStatus::unbounded:
      res.status = LpStatus::unbounded;
      res.ray = out.ray;
      break;
  }
  return res;
}

template <>
LpResult run_backend<double>(const LinearSystem& sys, const RatVec& c, const LpParams& params,
                             SimplexEps<double> eps) {
  auto p = detail::to_simplex_problem<double>(sys, c);
  Simplex<double> engine(p, eps, params.max_iterations);
  auto out = engine.solve();
  LpResult res;
  res.iterations = out.iterations;
  res.produced_by = Backend::floating;
  switch (out.status) {
    case SimplexStatus::optimal: {
      res.status = LpStatus::optimal;
      res.point = detail::to_rational(out.x);
      res.value = dot(c, res.point);
      res.dual_rows = detail::to_rational(out.dual_rows);
      res.reduced_costs = detail::to_rational(out.red_costs);
      break;
    }
    case SimplexStatus::infeasible:
      res.status = LpStatus::infeasible;
      res.farkas = detail::to_rational(out.farkas);
      break;
    case SimplexStatus::unbounded:
      res.status = LpStatus::unbounded;
      res.ray = detail::to_rational(out.ray);
      break;
  }
  return res;
}

}  // namespace

LpResult lp_solve(const LinearSystem& sys, const RatVec& c, const LpContext& ctx) {
  if (c.size() != sys.num_vars) throw DimensionMismatch("objective length != num_vars");
  sys.validate();
  ctx.tick();
  if (sys.box_empty()) {
    LpResult res;
    res.status = LpStatus::infeasible;
    res.farkas.setConstant(sys.num_rows(), Rational(0));
    return res;
  }
  if (sys.num_rows() == 0) return solve_box_only(sys, c);
  if (ctx.backend == Backend::exact) {
    return run_backend<Rational>(sys, c, ctx.params, SimplexEps<Rational>{});
  }
  SimplexEps<double> eps{ctx.params.feas_tol, ctx.params.opt_tol, ctx.params.pivot_tol};
  return run_backend<double>(sys, c, ctx.params, eps);
}

namespace {

bool check_optimal(const LinearSystem& sys, const RatVec& c, const LpResult& res,
                   const Rational& tol) {
  const Index n = sys.num_vars;
  const Index m = sys.num_rows();
  if (res.point.size() != n || res.dual_rows.size() != m || res.reduced_costs.size() != n)
    return false;
  // Primal feasibility.
  for (Index j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (sys.lower[ju].is_finite() && res.point(j) < sys.lower[ju].finite() - tol) return false;
    if (sys.upper[ju].is_finite() && res.point(j) > sys.upper[ju].finite() + tol) return false;
  }
  std::vector<Rational> slack(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const auto& row = sys.rows[static_cast<std::size_t>(i)];
    const Rational lhs = row.value_at(res.point);
    if (lhs > row.rhs + tol) return false;
    slack[static_cast<std::size_t>(i)] = row.rhs - lhs;
  }
  // Dual feasibility and stationarity: reduced_costs must equal c + A^T y.
  RatVec d = c;
  for (Index i = 0; i < m; ++i) {
    const Rational& y = res.dual_rows(i);
    if (y < -tol) return false;
    for (const auto& [j, a] : sys.rows[static_cast<std::size_t>(i)].coeffs) d(j) += y * a;
  }
  for (Index j = 0; j < n; ++j) {
    if ((d(j) - res.reduced_costs(j)).abs() > tol) return false;
  }
  // Complementary slackness.
  const Rational cs_tol = tol;
  for (Index i = 0; i < m; ++i) {
    if (res.dual_rows(i) > cs_tol && slack[static_cast<std::size_t>(i)] > cs_tol) return false;
  }
  for (Index j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (d(j) > cs_tol) {
      if (!sys.lower[ju].is_finite()) return false;
      if ((res.point(j) - sys.lower[ju].finite()).abs() > cs_tol) return false;
    } else if (d(j) < -cs_tol) {
      if (!sys.upper[ju].is_finite()) return false;
      if ((sys.upper[ju].finite() - res.point(j)).abs() > cs_tol) return false;
    }
  }
  // Strong duality: primal value equals dual value.
  Rational dual_obj;
  for (Index i = 0; i < m; ++i) dual_obj -= res.dual_rows(i) * sys.rows[static_cast<std::size_t>(i)].rhs;
  for (Index j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (d(j).sign() > 0) {
      if (!sys.lower[ju].is_finite()) return false;
      dual_obj += d(j) * sys.lower[ju].finite();
    } else if (d(j).sign() < 0) {
      if (!sys.upper[ju].is_finite()) return false;
      dual_obj += d(j) * sys.upper[ju].finite();
    }
  }
  const Rational primal = dot(c, res.point);
  if ((primal - res.value).abs() > tol) return false;
  Rational scale(1);
  if (primal.abs() > scale) scale = primal.abs();
  if ((primal - dual_obj).abs() > tol * scale) return false;
  return true;
}

bool check_infeasible(const LinearSystem& sys, const LpResult& res, const Rational& tol) {
  const Index m = sys.num_rows();
  if (res.farkas.size() != m) return false;
  for (Index i = 0; i < m; ++i)
    if (res.farkas(i) < -tol) return false;
  if (sys.box_empty()) return true;  // bound contradiction; any y >= 0 certifies
  RatVec w(sys.num_vars);
  for (Index j = 0; j < sys.num_vars; ++j) w(j) = Rational(0);
  Rational yb;
  for (Index i = 0; i < m; ++i) {
    const Rational& y = res.farkas(i);
    if (y.is_zero()) continue;
    for (const auto& [j, a] : sys.rows[static_cast<std::size_t>(i)].coeffs) w(j) += y * a;
    yb += y * sys.rows[static_cast<std::size_t>(i)].rhs;
  }
  const ExtValue lo = sys.box_min(w);
  if (!lo.is_finite()) return lo.is_pos_inf();
  return lo.finite() > yb;
}

bool check_unbounded(const LinearSystem& sys, const RatVec& c, const LpResult& res,
                     const Rational& tol) {
  if (res.ray.size() != sys.num_vars) return false;
  Rational drop = dot(c, res.ray);
  if (!(drop < -tol)) return false;
  for (const auto& row : sys.rows) {
    Rational v = row.value_at(res.ray);
    if (v > tol) return false;
  }
  for (Index j = 0; j < sys.num_vars; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (sys.lower[ju].is_finite() && res.ray(j) < -tol) return false;
    if (sys.upper[ju].is_finite() && res.ray(j) > tol) return false;
  }
  return true;
}

}  // namespace

bool lp_check_certificate(const LinearSystem& sys, const RatVec& c, const LpResult& res,
                          const Rational& tol) {
  try {
    sys.validate();
    if (c.size() != sys.num_vars) return false;
    switch (res.status) {
      case LpStatus::optimal:
        return check_optimal(sys, c, res, tol);
      case LpStatus::infeasible:
        return check_infeasible(sys, res, tol);
      case LpStatus::unbounded:
        return check_unbounded(sys, c, res, tol);
    }
  } catch (const std::exception&) {
    return false;
  }
  return false;
}

}  // namespace treecomp
