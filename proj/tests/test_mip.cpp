#include "doctest.h"
#include <set>
#include "treecomp/fixtures.hpp"
#include "treecomp/mip.hpp"

using namespace treecomp;

namespace {
LpContext exact_ctx() { return LpContext{}; }

MipProblem from_instance(const Instance& inst) {
  return MipProblem{inst.system, inst.objective, inst.integrality};
}
}  // namespace

TEST_CASE("mip solves random small instances to the brute-force optimum") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto inst = fixtures::random_ip(seed, 3, 3, 3);
    const ExtValue expect = fixtures::brute_integer_optimum(inst);
    auto res = mip_solve(from_instance(inst), MipParams{}, exact_ctx());
    if (expect.is_pos_inf()) {
      CHECK(res.status == MipStatus::infeasible);
    } else {
      REQUIRE(res.status == MipStatus::optimal);
      CHECK(ExtValue::of(*res.best_value) == expect);
    }
  }
}

TEST_CASE("mip respects an objective cutoff") {
  // min -x0-x1 over [0,3]^2 integer: optimum -6. Cutoff above -7 prunes nothing
  // acceptable if we demand bound <= -7: search proves infeasibility of the target.
  auto inst = fixtures::box_instance(Rational(3), "bx");
  MipParams params;
  params.objective_cutoff = Rational(-7);
  auto res = mip_solve(from_instance(inst), params, exact_ctx());
  CHECK(res.status == MipStatus::infeasible);

  params.objective_cutoff = Rational(-6);
  res = mip_solve(from_instance(inst), params, exact_ctx());
  REQUIRE(res.status == MipStatus::optimal);
  CHECK(*res.best_value == Rational(-6));
}

TEST_CASE("incumbent filter can stop early") {
  auto inst = fixtures::box_instance(Rational(3), "bx");
  int calls = 0;
  auto res = mip_solve(from_instance(inst), MipParams{}, exact_ctx(),
                       nullptr, [&](const RatVec&, const Rational&) {
                         ++calls;
                         return IncumbentAction::keep_and_stop;
                       });
  CHECK(res.status == MipStatus::early_stop);
  CHECK(calls == 1);
  CHECK(res.best_value.has_value());
}

TEST_CASE("incumbent filter rejection excludes the integer assignment") {
  // Reject every incumbent: the search must enumerate distinct integer
  // assignments and end with no incumbent.
  auto inst = fixtures::box_instance(Rational(1), "b1");  // 4 integer points
  std::set<std::pair<long long, long long>> seen;
  auto res = mip_solve(from_instance(inst), MipParams{}, exact_ctx(), nullptr,
                       [&](const RatVec& x, const Rational&) {
                         auto key = std::make_pair(x(0).floor_ll(), x(1).floor_ll());
                         CHECK(seen.insert(key).second);  // never repeated
                         return IncumbentAction::reject;
                       });
  CHECK(res.status == MipStatus::infeasible);
  CHECK(res.rejections == 4);
  CHECK(seen.size() == 4);
}

TEST_CASE("node limit reports cleanly") {
  // Fractional root, so at least one branching is required.
  auto inst = fixtures::box_instance(Rational(1, 5), "bf");
  MipParams params;
  params.node_limit = 1;
  auto res = mip_solve(from_instance(inst), params, exact_ctx());
  CHECK(res.status == MipStatus::node_limit);
}

TEST_CASE("virtual-clock time limit reports cleanly") {
  auto inst = fixtures::box_instance(Rational(1, 5), "bf");
  LpContext ctx;
  ctx.counter = std::make_shared<LpCounter>();
  Stopwatch watch(ctx, /*virtual_clock=*/true, /*seconds_per_lp=*/1.0);
  MipParams params;
  params.time_limit_s = 3.0;  // three LP solves of virtual budget
  auto res = mip_solve(from_instance(inst), params, ctx, &watch);
  CHECK(res.status == MipStatus::time_limit);
}
