#pragma once

#include "treecomp/mip.hpp"
#include "treecomp/tree.hpp"

namespace treecomp {

/// Exact LP values of the two sides of a disjunction over Q.
std::pair<ExtValue, ExtValue> disjunction_side_values(const LinearSystem& q, const RatVec& c,
                                                      const Disjunction& dj, const LpContext& ctx);

/// The replacement-validity test: both sides at or above the bound d
/// (for d = +inf this demands two infeasible sides).
bool disjunction_preserves_bound(const LinearSystem& q, const RatVec& c, const Disjunction& dj,
                                 const ExtValue& d, const LpContext& ctx);

struct DisjunctionMipConfig {
  std::optional<int> support_limit;   // max nonzeros of pi; nullopt = unrestricted
  long long coefficient_bound = 100;  // |pi_i| <= M
  Rational delta_accept = Rational(1, 10'000);
  long long node_limit = 50'000;
  std::optional<double> deadline_s;  // absolute on the supplied stopwatch
};

struct DisjunctionSearchOutcome {
  std::optional<Disjunction> found;
  std::optional<Rational> delta;  // margin of the accepted solution
  bool timed_out = false;
  bool hit_node_limit = false;
  bool unbounded_offset_range = false;  // could not bound pi0; gave up
  long long nodes = 0;
  long long rejections = 0;
};

/// Searches for an integer disjunction whose two sides both keep LP value
/// at or above d over Q, via a dual-certificate MIP maximizing the margin
/// delta. Candidates are confirmed by the two exact side LPs before being
/// returned; failed candidates are excluded and the search continues. The
/// coefficient grid is explored with iterative deepening on the magnitude
/// bound, so small directions are found quickly.
///
/// d = +inf turns the model into a two-sided infeasibility search
/// (certificate scalars fixed to zero). Requires d > min over Q of c.x,
/// which the compression loop guarantees.
DisjunctionSearchOutcome find_disjunction_exact(const LinearSystem& q, const RatVec& c,
                                                const ExtValue& d,
                                                const std::vector<bool>& integer_mask,
                                                const DisjunctionMipConfig& cfg,
                                                const LpContext& ctx,
                                                const Stopwatch* watch = nullptr);

}  // namespace treecomp
