#pragma once

#include <atomic>
#include <memory>

#include "treecomp/linear_system.hpp"
#include "treecomp/simplex.hpp"

namespace treecomp {

enum class Backend { exact, floating };

struct LpParams {
  double feas_tol = 1e-7;      // floating feasibility, absolute
  double opt_tol = 1e-7;       // floating reduced-cost threshold
  double obj_rel_tol = 1e-9;   // relative objective comparisons
  double pivot_tol = 1e-10;    // floating zero threshold for pivots
  long max_iterations = 2'000'000;
};

struct LpCounter {
  std::atomic<long long> solves{0};
};

/// Shared solver configuration handed around the toolkit. The counter, when
/// present, ticks once per LP solve and feeds the virtual clock.
struct LpContext {
  Backend backend = Backend::exact;
  LpParams params;
  std::shared_ptr<LpCounter> counter;

  void tick() const {
    if (counter) counter->solves.fetch_add(1, std::memory_order_relaxed);
  }
  LpContext with_backend(Backend b) const {
    LpContext c = *this;
    c.backend = b;
    return c;
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

/// Certified LP outcome. All certificate data is rational regardless of
/// the backend that produced it (doubles convert exactly).
struct LpResult {
  LpStatus status = LpStatus::optimal;
  Rational value;        // optimal objective
  RatVec point;          // optimal primal point
  RatVec dual_rows;      // multipliers for the <= rows
  RatVec reduced_costs;  // c + A^T y, complementary to the bounds
  RatVec farkas;         // infeasibility certificate over the rows
  RatVec ray;            // unbounded direction
  long iterations = 0;
  Backend produced_by = Backend::exact;

  ExtValue objective_bound() const {
    switch (status) {
      case LpStatus::infeasible:
        return ExtValue::pos_inf();
      case LpStatus::unbounded:
        return ExtValue::neg_inf();
      default:
        return ExtValue::of(value);
    }
  }
};

namespace detail {

template <class S>
SimplexProblem<S> to_simplex_problem(const LinearSystem& sys, const RatVec& c);

template <>
inline SimplexProblem<Rational> to_simplex_problem<Rational>(const LinearSystem& sys,
                                                             const RatVec& c) {
  SimplexProblem<Rational> p;
  p.m = sys.num_rows();
  p.n = sys.num_vars;
  p.A.setZero(p.m, p.n);
  p.b.resize(p.m);
  for (Index i = 0; i < p.m; ++i) {
    for (const auto& [j, a] : sys.rows[static_cast<std::size_t>(i)].coeffs) p.A(i, j) = a;
    p.b(i) = sys.rows[static_cast<std::size_t>(i)].rhs;
  }
  p.c = c;
  p.has_lo.resize(static_cast<std::size_t>(p.n));
  p.has_hi.resize(static_cast<std::size_t>(p.n));
  p.lo.resize(p.n);
  p.hi.resize(p.n);
  for (Index j = 0; j < p.n; ++j) {
    p.has_lo[static_cast<std::size_t>(j)] = sys.lower[static_cast<std::size_t>(j)].is_finite();
    p.has_hi[static_cast<std::size_t>(j)] = sys.upper[static_cast<std::size_t>(j)].is_finite();
    p.lo(j) = p.has_lo[static_cast<std::size_t>(j)] ? sys.lower[static_cast<std::size_t>(j)].finite()
                                                    : Rational(0);
    p.hi(j) = p.has_hi[static_cast<std::size_t>(j)] ? sys.upper[static_cast<std::size_t>(j)].finite()
                                                    : Rational(0);
  }
  return p;
}

template <>
inline SimplexProblem<double> to_simplex_problem<double>(const LinearSystem& sys, const RatVec& c) {
  SimplexProblem<double> p;
  p.m = sys.num_rows();
  p.n = sys.num_vars;
  p.A.setZero(p.m, p.n);
  p.b.resize(p.m);
  for (Index i = 0; i < p.m; ++i) {
    for (const auto& [j, a] : sys.rows[static_cast<std::size_t>(i)].coeffs)
      p.A(i, j) = a.to_double();
    p.b(i) = sys.rows[static_cast<std::size_t>(i)].rhs.to_double();
  }
  p.c.resize(p.n);
  for (Index j = 0; j < p.n; ++j) p.c(j) = c(j).to_double();
  p.has_lo.resize(static_cast<std::size_t>(p.n));
  p.has_hi.resize(static_cast<std::size_t>(p.n));
  p.lo.resize(p.n);
  p.hi.resize(p.n);
  for (Index j = 0; j < p.n; ++j) {
    p.has_lo[static_cast<std::size_t>(j)] = sys.lower[static_cast<std::size_t>(j)].is_finite();
    p.has_hi[static_cast<std::size_t>(j)] = sys.upper[static_cast<std::size_t>(j)].is_finite();
    p.lo(j) = p.has_lo[static_cast<std::size_t>(j)]
                  ? sys.lower[static_cast<std::size_t>(j)].finite().to_double()
                  : 0.0;
    p.hi(j) = p.has_hi[static_cast<std::size_t>(j)]
                  ? sys.upper[static_cast<std::size_t>(j)].finite().to_double()
                  : 0.0;
  }
  return p;
}

inline RatVec to_rational(const Eigen::VectorXd& v) {
  RatVec r(v.size());
  for (Index i = 0; i < v.size(); ++i) r(i) = Rational::from_double(v(i));
  return r;
}

}  // namespace detail

/// Solves min c.x over the system with the requested backend. The result
/// always carries a certificate: dual multipliers and reduced costs for
/// optimal, a Farkas vector for infeasible, a ray for unbounded.
LpResult lp_solve(const LinearSystem& sys, const RatVec& c, const LpContext& ctx);

/// Exact-arithmetic certificate validation; `tol` relaxes every comparison
/// (pass 0 to demand exact certificates). Returns false on any malformed
/// or violated certificate instead of throwing.
bool lp_check_certificate(const LinearSystem& sys, const RatVec& c, const LpResult& res,
                          const Rational& tol = Rational(0));

}  // namespace treecomp
