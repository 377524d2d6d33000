#pragma once

// Test-only brute-force oracles, independent of the simplex implementation.
// Valid for small dimensions and bounded feasible regions only.

#include <optional>
#include <vector>

#include "treecomp/linear_system.hpp"

namespace treecomp::testing {

// Gaussian elimination over the rationals; returns nullopt for singular.
inline std::optional<RatVec> solve_square(std::vector<std::vector<Rational>> a, RatVec rhs) {
  const Index n = rhs.size();
  for (Index col = 0; col < n; ++col) {
    Index piv = -1;
    for (Index r = col; r < n; ++r) {
      if (!a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(piv)]);
    std::swap(rhs(col), rhs(piv));
    const Rational d = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    for (Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const Rational f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
      if (f.is_zero()) continue;
      for (Index k = col; k < n; ++k)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -=
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
      rhs(r) -= f * rhs(col);
    }
  }
  RatVec x(n);
  for (Index i = 0; i < n; ++i)
    x(i) = rhs(i) / a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  return x;
}

struct BruteLpResult {
  bool feasible = false;
  Rational value;
  RatVec point;
};

// Enumerates vertices (intersections of n constraints drawn from rows and
// finite bounds), keeps the feasible ones, and minimizes c.x over them.
// Correct for bounded nonempty polyhedra; infeasible when no vertex survives.
inline BruteLpResult brute_lp_min(const LinearSystem& sys, const RatVec& c) {
  const Index n = sys.num_vars;
  struct Cons {
    RatVec a;
    Rational rhs;
  };
  std::vector<Cons> pool;
  for (const auto& row : sys.rows) {
    Cons cn;
    cn.a.setConstant(n, Rational(0));
    for (const auto& [j, v] : row.coeffs) cn.a(j) = v;
    cn.rhs = row.rhs;
    pool.push_back(std::move(cn));
  }
  for (Index j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (sys.upper[ju].is_finite()) {
      Cons cn;
      cn.a.setConstant(n, Rational(0));
      cn.a(j) = Rational(1);
      cn.rhs = sys.upper[ju].finite();
      pool.push_back(std::move(cn));
    }
    if (sys.lower[ju].is_finite()) {
      Cons cn;
      cn.a.setConstant(n, Rational(0));
      cn.a(j) = Rational(-1);
      cn.rhs = -sys.lower[ju].finite();
      pool.push_back(std::move(cn));
    }
  }
  BruteLpResult best;
  const auto total = static_cast<Index>(pool.size());
  std::vector<Index> pick(static_cast<std::size_t>(n));
  auto feasible = [&](const RatVec& x) {
    for (const auto& cn : pool) {
      Rational lhs;
      for (Index j = 0; j < n; ++j) lhs += cn.a(j) * x(j);
      if (lhs > cn.rhs) return false;
    }
    return true;
  };
  auto consider = [&](const RatVec& x) {
    if (!feasible(x)) return;
    Rational v = dot(c, x);
    if (!best.feasible || v < best.value) {
      best.feasible = true;
      best.value = v;
      best.point = x;
    }
  };
  // Recursive combination enumeration.
  auto rec = [&](auto&& self, Index depth, Index start) -> void {
    if (depth == n) {
      std::vector<std::vector<Rational>> a(static_cast<std::size_t>(n));
      RatVec rhs(n);
      for (Index i = 0; i < n; ++i) {
        const auto& cn = pool[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
        a[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
        for (Index j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cn.a(j);
        rhs(i) = cn.rhs;
      }
      if (auto x = solve_square(std::move(a), rhs)) consider(*x);
      return;
    }
    for (Index i = start; i < total; ++i) {
      pick[static_cast<std::size_t>(depth)] = i;
      self(self, depth + 1, i + 1);
    }
  };
  if (total >= n) rec(rec, 0, 0);
  return best;
}

}  // namespace treecomp::testing
