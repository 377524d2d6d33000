#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "treecomp/extended.hpp"
#include "treecomp/rational.hpp"

namespace treecomp {

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// One inequality row a.x <= rhs, coefficients stored sparse and sorted
/// by column index.
struct SparseRow {
  std::vector<std::pair<Index, Rational>> coeffs;
  Rational rhs;

  Rational value_at(const RatVec& x) const {
    Rational v;
    for (const auto& [j, a] : coeffs) v += a * x(j);
    return v;
  }
};

inline SparseRow make_row(std::vector<std::pair<Index, Rational>> coeffs, Rational rhs) {
  std::sort(coeffs.begin(), coeffs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return SparseRow{std::move(coeffs), std::move(rhs)};
}

/// Polyhedron {x : Ax <= b, lower <= x <= upper} with extended bounds.
struct LinearSystem {
  Index num_vars = 0;
  std::vector<SparseRow> rows;
  std::vector<ExtValue> lower;
  std::vector<ExtValue> upper;

  Index num_rows() const { return static_cast<Index>(rows.size()); }

  static LinearSystem box(std::vector<ExtValue> lo, std::vector<ExtValue> hi) {
    LinearSystem s;
    s.num_vars = static_cast<Index>(lo.size());
    s.lower = std::move(lo);
    s.upper = std::move(hi);
    s.validate();
    return s;
  }

  void add_row(SparseRow row) {
    for (const auto& [j, a] : row.coeffs) {
      if (j < 0 || j >= num_vars) throw DimensionMismatch("row index out of range");
      (void)a;
    }
    rows.push_back(std::move(row));
  }

  void validate() const {
    if (num_vars < 1) throw DimensionMismatch("system needs at least one variable");
    if (lower.size() != static_cast<std::size_t>(num_vars) ||
        upper.size() != static_cast<std::size_t>(num_vars))
      throw DimensionMismatch("bound vectors inconsistent with num_vars");
    for (const auto& r : rows) {
      bool nonzero = false;
      Index prev = -1;
      for (const auto& [j, a] : r.coeffs) {
        if (j < 0 || j >= num_vars) throw DimensionMismatch("row index out of range");
        if (j <= prev) throw DimensionMismatch("row indices must be strictly increasing");
        prev = j;
        if (!a.is_zero()) nonzero = true;
      }
      if (!nonzero) throw DimensionMismatch("row with no nonzero coefficient");
    }
  }

  /// True when some variable has contradictory bounds (empty box).
  bool box_empty() const {
    for (Index j = 0; j < num_vars; ++j) {
      if (lower[j].is_finite() && upper[j].is_finite() && upper[j].finite() < lower[j].finite())
        return true;
      if (lower[j].is_pos_inf() || upper[j].is_neg_inf()) return true;
    }
    return false;
  }

  /// min over the box of w.x; +inf on an empty box, -inf when some needed
  /// bound is missing.
  ExtValue box_min(const RatVec& w) const {
    if (box_empty()) return ExtValue::pos_inf();
    Rational total;
    for (Index j = 0; j < num_vars; ++j) {
      int s = w(j).sign();
      if (s == 0) continue;
      const ExtValue& bound = s > 0 ? lower[j] : upper[j];
      if (!bound.is_finite()) return ExtValue::neg_inf();
      total += w(j) * bound.finite();
    }
    return ExtValue::of(total);
  }
};

}  // namespace treecomp
