#pragma once

// Test-only exhaustive disjunction search: enumerate every integer
// direction in the coefficient box (restricted support), every meaningful
// offset, and accept through the two side LPs. Independent of the MIP path.

#include <optional>

#include "treecomp/disjunction_mip.hpp"

namespace treecomp::testing {

inline std::optional<Disjunction> enumerate_valid_disjunction(
    const LinearSystem& q, const RatVec& c, const ExtValue& d, const std::vector<bool>& mask,
    long long M, std::optional<int> support_limit, const LpContext& ctx) {
  std::vector<Index> vars;
  for (Index j = 0; j < q.num_vars; ++j)
    if (mask[static_cast<std::size_t>(j)]) vars.push_back(j);
  const auto K = static_cast<Index>(vars.size());
  std::vector<long long> coeff(static_cast<std::size_t>(K), -M);
  if (K == 0) return std::nullopt;

  const LpContext exact = ctx.with_backend(Backend::exact);
  std::optional<Disjunction> found;
  auto try_direction = [&]() -> bool {
    std::vector<std::pair<Index, long long>> entries;
    for (Index k = 0; k < K; ++k)
      if (coeff[static_cast<std::size_t>(k)] != 0)
        entries.emplace_back(vars[static_cast<std::size_t>(k)], coeff[static_cast<std::size_t>(k)]);
    if (entries.empty()) return false;
    if (support_limit && static_cast<int>(entries.size()) > *support_limit) return false;
    // Offset window from the direction's range over Q.
    RatVec w(q.num_vars);
    for (Index j = 0; j < q.num_vars; ++j) w(j) = Rational(0);
    for (const auto& [j, a] : entries) w(j) = Rational(a);
    auto lo_res = lp_solve(q, w, exact);
    if (lo_res.status != LpStatus::optimal) return false;  // empty or unbounded range
    RatVec neg = -w;
    auto hi_res = lp_solve(q, neg, exact);
    if (hi_res.status != LpStatus::optimal) return false;
    const long long off_lo = lo_res.value.floor_ll() - 1;
    const long long off_hi = (-hi_res.value).ceil_ll();
    for (long long off = off_lo; off <= off_hi; ++off) {
      Disjunction dj{entries, off};
      if (disjunction_preserves_bound(q, c, dj, d, exact)) {
        found = dj;
        return true;
      }
    }
    return false;
  };

  // Odometer over the coefficient grid.
  while (true) {
    if (try_direction()) return found;
    Index k = 0;
    while (k < K) {
      if (++coeff[static_cast<std::size_t>(k)] <= M) break;
      coeff[static_cast<std::size_t>(k)] = -M;
      ++k;
    }
    if (k == K) break;
  }
  return std::nullopt;
}

}  // namespace treecomp::testing
