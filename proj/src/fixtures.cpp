#include "treecomp/fixtures.hpp"

#include <random>

namespace treecomp::fixtures {

Instance box_instance(const Rational& hi, const std::string& name) {
  Instance inst;
  inst.name = name;
  inst.system = LinearSystem::box({ExtValue::of(Rational(0)), ExtValue::of(Rational(0))},
                                  {ExtValue::of(hi), ExtValue::of(hi)});
  inst.objective.resize(2);
  inst.objective << Rational(-1), Rational(-1);
  inst.integrality = {true, true};
  inst.known_optimal = ExtValue::of(Rational(0));
  return inst;
}

Instance triangle_instance() {
  Instance inst;
  inst.name = "triangle";
  inst.system = LinearSystem::box(
      {ExtValue::of(Rational(-1, 2)), ExtValue::of(Rational(-1, 2))},
      {ExtValue::of(Rational(1)), ExtValue::of(Rational(1))});
  inst.system.add_row(make_row({{0, Rational(1)}, {1, Rational(1)}}, Rational(1, 2)));
  inst.objective.resize(2);
  inst.objective << Rational(-1), Rational(-1);
  inst.integrality = {true, true};
  inst.known_optimal = ExtValue::of(Rational(0));
  return inst;
}

namespace {

Fixture seven_node_demo(Instance inst, const LpContext& ctx) {
  auto shared = std::make_shared<const Instance>(std::move(inst));
  BbTree tree = BbTree::make_root(shared, ctx);
  auto [v1, v2] = tree.branch_leaf(tree.root_id(), unit_disjunction(0, 0), ctx);
  tree.branch_leaf(v1, unit_disjunction(1, 0), ctx);
  tree.branch_leaf(v2, unit_disjunction(0, 0), ctx);  // repeated split at an empty node
  return Fixture{shared, std::move(tree)};
}

}  // namespace

Fixture box_fifth(const LpContext& ctx) {
  return seven_node_demo(box_instance(Rational(1, 5), "box-fifth"), ctx);
}

Fixture box_half(const LpContext& ctx) {
  return seven_node_demo(box_instance(Rational(1, 2), "box-half"), ctx);
}

Fixture triangle(const LpContext& ctx) { return seven_node_demo(triangle_instance(), ctx); }

namespace {

Instance random_ip_candidate(std::mt19937_64& rng, std::uint64_t seed, Index n, Index m,
                             long coeff_range) {
  auto next = [&](long lo, long hi) {
    return static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)) + lo;
  };
  Instance inst;
  inst.name = "rand-" + std::to_string(seed);
  inst.system.num_vars = n;
  for (Index j = 0; j < n; ++j) {
    inst.system.lower.push_back(ExtValue::of(Rational(0)));
    inst.system.upper.push_back(ExtValue::of(Rational(next(1, 3))));
    inst.integrality.push_back(true);
  }
  for (Index i = 0; i < m; ++i) {
    std::vector<std::pair<Index, Rational>> coeffs;
    for (Index j = 0; j < n; ++j) {
      long a = next(-coeff_range, coeff_range);
      if (a != 0) coeffs.emplace_back(j, Rational(a));
    }
    if (coeffs.empty())
      coeffs.emplace_back(static_cast<Index>(rng() % static_cast<unsigned long>(n)), Rational(1));
    inst.system.add_row(make_row(std::move(coeffs), Rational(next(0, coeff_range))));
  }
  inst.objective.resize(n);
  bool nonzero = false;
  while (!nonzero) {
    for (Index j = 0; j < n; ++j) {
      long cj = next(-coeff_range, coeff_range);
      inst.objective(j) = Rational(cj);
      if (cj != 0) nonzero = true;
    }
  }
  return inst;
}

}  // namespace

Instance random_ip(std::uint64_t seed, Index n, Index m, long coeff_range) {
  std::mt19937_64 rng(seed);
  const LpContext exact;
  Instance last;
  // Rejection-sample until the root relaxation is fractional on some
  // integer variable; the corpus is for branching and compression tests,
  // and integral roots exercise neither.
  for (int attempt = 0; attempt < 64; ++attempt) {
    last = random_ip_candidate(rng, seed, n, m, coeff_range);
    auto res = lp_solve(last.system, last.objective, exact);
    if (res.status != LpStatus::optimal) continue;
    for (Index j = 0; j < n; ++j) {
      if (!res.point(j).is_integer()) return last;
    }
  }
  return last;
}

ExtValue brute_integer_optimum(const Instance& inst) {
  const Index n = inst.num_vars();
  std::vector<long long> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    if (!inst.system.lower[ju].is_finite() || !inst.system.upper[ju].is_finite())
      throw std::logic_error("brute_integer_optimum needs finite bounds");
    lo[ju] = inst.system.lower[ju].finite().ceil_ll();
    hi[ju] = inst.system.upper[ju].finite().floor_ll();
  }
  ExtValue best = ExtValue::pos_inf();
  RatVec x(n);
  auto rec = [&](auto&& self, Index j) -> void {
    if (j == n) {
      for (const auto& row : inst.system.rows)
        if (row.value_at(x) > row.rhs) return;
      Rational v = dot(inst.objective, x);
      if (ExtValue::of(v) < best) best = ExtValue::of(v);
      return;
    }
    for (long long t = lo[static_cast<std::size_t>(j)]; t <= hi[static_cast<std::size_t>(j)]; ++t) {
      x(j) = Rational(t);
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace treecomp::fixtures
