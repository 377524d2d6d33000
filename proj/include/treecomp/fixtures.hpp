#pragma once

#include "treecomp/tree.hpp"

namespace treecomp::fixtures {

/// The [0,hi]^2 box instance with objective (-1,-1), both variables
/// integer, known optimum 0 at the origin.
Instance box_instance(const Rational& hi, const std::string& name);

/// Triangle with vertices (-1/2,-1/2), (-1/2,1), (1,-1/2), objective
/// (-1,-1), both variables integer, known optimum 0.
Instance triangle_instance();

struct Fixture {
  std::shared_ptr<const Instance> instance;
  BbTree tree;
};

/// Seven-node demo tree over the [0,1/5]^2 box: the root splits on x0,
/// its left child on x1, and the (empty) right child repeats the x0 split.
/// Expectations: dual bound 0; dropping the right child gives the 5-node
/// tree; replacing the root with ((1,1),0) gives the 3-node tree, bound 0.
Fixture box_fifth(const LpContext& ctx);

/// Same shape over the [0,1/2]^2 box, where the root replacement with
/// ((1,1),0) is not a valid compression (bound drops to -1).
Fixture box_half(const LpContext& ctx);

/// Same shape over the triangle: bound -1/2, improving to 0 after the
/// root replacement with ((1,1),0).
Fixture triangle(const LpContext& ctx);

/// Deterministic small integer instances: bounds [0,u_j] with u_j in
/// 1..3, row coefficients in [-coeff_range, coeff_range], nonnegative
/// right-hand sides (the origin stays feasible), nonzero objective.
Instance random_ip(std::uint64_t seed, Index n, Index m, long coeff_range);

/// Integer optimum of a small instance by brute enumeration over the
/// integer points of the bounding box; +inf when no integer point is
/// feasible. Test oracle; only valid when every variable has finite bounds.
ExtValue brute_integer_optimum(const Instance& inst);

}  // namespace treecomp::fixtures
