#include <cmath>

#include "doctest.h"
#include "sim_corpus.hpp"
#include "treecomp/fixtures.hpp"
#include "treecomp/records.hpp"

using namespace treecomp;

namespace {
LpContext exact_ctx() { return LpContext{}; }
}

TEST_CASE("precompute on the demo tree: replace at root, drop at the empty child") {
  auto fx = fixtures::box_fifth(exact_ctx());
  FinderChoice finder;
  finder.method = CompressMethod::heuristic;
  auto records = precompute_records(fx.tree, finder, std::nullopt, exact_ctx());
  REQUIRE(records.size() == 3);  // non-leaf nodes 0, 1, 2
  CHECK(records[0].node == 0);
  CHECK(records[0].compressible);
  CHECK(records[0].action == RecordAction::replace);
  REQUIRE(records[0].disjunction.has_value());
  CHECK(records[0].disjunction->coeffs ==
        std::vector<std::pair<Index, long long>>{{0, 1}, {1, 1}});
  CHECK(records[0].disjunction->offset == 0);
  // Left child: subtree of 3 cannot shrink via replace; not droppable.
  CHECK(records[1].node == 1);
  CHECK(!records[1].compressible);
  CHECK(records[1].action == RecordAction::none);
  // Right child: empty, droppable.
  CHECK(records[2].node == 2);
  CHECK(records[2].compressible);
  CHECK(records[2].action == RecordAction::drop);
}

TEST_CASE("a single-node tree has no records") {
  auto inst = std::make_shared<const Instance>(fixtures::box_instance(Rational(1, 5), "b"));
  auto t = BbTree::make_root(inst, exact_ctx());
  FinderChoice finder;
  CHECK(precompute_records(t, finder, std::nullopt, exact_ctx()).empty());
}

TEST_CASE("zero per-node budget records everything as incompressible") {
  auto fx = fixtures::box_fifth(exact_ctx());
  FinderChoice finder;
  auto records = precompute_records(fx.tree, finder, 0.0, exact_ctx());
  for (const auto& r : records) {
    CHECK(!r.compressible);
    CHECK(r.time_s == 0.0);
  }
}

TEST_CASE("orderings arrange the non-leaf nodes as specified") {
  auto fx = fixtures::box_fifth(exact_ctx());
  FinderChoice finder;
  auto records = precompute_records(fx.tree, finder, std::nullopt, exact_ctx());

  SUBCASE("node-id visits the last created first and the root last") {
    auto order = order_nodes(fx.tree, records, {OrderingKind::node_id, 0});
    CHECK(order == std::vector<NodeId>{2, 1, 0});
  }
  SUBCASE("dfs is preorder") {
    auto order = order_nodes(fx.tree, records, {OrderingKind::dfs, 0});
    CHECK(order == std::vector<NodeId>{0, 1, 2});
  }
  SUBCASE("subtree-size puts small subtrees first") {
    auto order = order_nodes(fx.tree, records, {OrderingKind::subtree_size, 0});
    CHECK(order == std::vector<NodeId>{1, 2, 0});  // 3, 3, 7 with id tie-break
  }
  SUBCASE("gap sorts by |bound - node bound|") {
    // d = 0; node bounds: root -2/5, left -1/5, right +inf.
    auto order = order_nodes(fx.tree, records, {OrderingKind::gap, 0});
    CHECK(order == std::vector<NodeId>{1, 0, 2});
  }
  SUBCASE("expert puts compressible nodes first") {
    auto order = order_nodes(fx.tree, records, {OrderingKind::expert, 0});
    REQUIRE(order.size() == 3);
    CHECK(order[2] == 1);  // the only incompressible node comes last
  }
  SUBCASE("random is deterministic per seed") {
    auto a = order_nodes(fx.tree, records, {OrderingKind::random_shuffle, 42});
    auto b = order_nodes(fx.tree, records, {OrderingKind::random_shuffle, 42});
    CHECK(a == b);
  }
  SUBCASE("missing records raise") {
    std::vector<NodeRecord> partial(records.begin(), records.begin() + 1);
    CHECK_THROWS_AS(order_nodes(fx.tree, partial, {OrderingKind::dfs, 0}), MissingRecord);
  }
}

TEST_CASE("simulate: zero horizon does nothing") {
  auto fx = fixtures::box_fifth(exact_ctx());
  FinderChoice finder;
  auto records = precompute_records(fx.tree, finder, std::nullopt, exact_ctx());
  for (auto& r : records) r.time_s = 1.0;
  auto traj = simulate(fx.tree, records, {OrderingKind::dfs, 0}, 0.0);
  CHECK(traj.steps.empty());
  CHECK(traj.final_size == 7);
}

TEST_CASE("simulate: unlimited horizon reaches size 3 under every ordering") {
  auto fx = fixtures::box_fifth(exact_ctx());
  FinderChoice finder;
  auto records = precompute_records(fx.tree, finder, std::nullopt, exact_ctx());
  for (auto& r : records) r.time_s = 1.0;
  for (OrderingKind k : {OrderingKind::random_shuffle, OrderingKind::dfs, OrderingKind::node_id,
                         OrderingKind::subtree_size, OrderingKind::gap, OrderingKind::expert}) {
    auto traj = simulate(fx.tree, records, {k, 7}, std::nullopt);
    CHECK(traj.final_size == 3);
  }
}

TEST_CASE("simulate skips nodes removed by an earlier replacement") {
  auto fx = fixtures::box_fifth(exact_ctx());
  FinderChoice finder;
  auto records = precompute_records(fx.tree, finder, std::nullopt, exact_ctx());
  for (auto& r : records) r.time_s = 1.0;
  // DFS order processes the root first; its replace wipes nodes 1 and 2.
  auto traj = simulate(fx.tree, records, {OrderingKind::dfs, 0}, std::nullopt);
  REQUIRE(traj.steps.size() == 1);
  CHECK(traj.steps[0].node == 0);
  CHECK(traj.final_size == 3);
}

TEST_CASE("simulate stops before a node that would overrun the horizon") {
  auto fx = fixtures::box_fifth(exact_ctx());
  FinderChoice finder;
  auto records = precompute_records(fx.tree, finder, std::nullopt, exact_ctx());
  for (auto& r : records) r.time_s = 2.0;
  // node-id order: 2 (drop, 2s), then 1 (2s) would exceed 3s.
  auto traj = simulate(fx.tree, records, {OrderingKind::node_id, 0}, 3.0);
  REQUIRE(traj.steps.size() == 1);
  CHECK(traj.steps[0].node == 2);
  CHECK(traj.final_size == 5);
}

TEST_CASE("AUC formula hits the stated degenerate values") {
  Trajectory t;
  t.initial_size = 10;
  t.horizon_s = 5.0;
  SUBCASE("one node taking the whole horizon gives 100") {
    t.steps = {{0, 5.0, 4}};
    t.final_size = 4;
    CHECK(auc_percent(t) == doctest::Approx(100.0));
  }
  SUBCASE("the two-segment hand example gives 70 exactly") {
    t.horizon_s = 2.0;
    t.steps = {{0, 1.0, 4}, {1, 1.0, 4}};
    t.final_size = 4;
    CHECK(auc_percent(t) == 70.0);
  }
  SUBCASE("empty trajectory: 0 plain, 100 with the terminal segment") {
    t.final_size = 10;
    CHECK(auc_percent(t) == 0.0);
    CHECK(auc_percent(t, true) == 100.0);
  }
  SUBCASE("zero horizon raises") {
    t.horizon_s = 0.0;
    CHECK_THROWS_AS(auc_percent(t), ZeroHorizon);
    t.horizon_s.reset();
    CHECK_THROWS_AS(auc_percent(t), ZeroHorizon);
  }
}

TEST_CASE("compression ratio formula") {
  CHECK(compression_ratio_percent(7, 3) == doctest::Approx(400.0 / 7.0));
  CHECK(compression_ratio_percent(5, 5) == 0.0);
  CHECK(compression_ratio_percent(1000, 191) == doctest::Approx(80.9));
}

TEST_CASE("records round-trip through JSONL") {
  auto fx = fixtures::box_fifth(exact_ctx());
  FinderChoice finder;
  auto records = precompute_records(fx.tree, finder, std::nullopt, exact_ctx());
  auto back = records_from_jsonl(records_to_jsonl(records));
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].node == records[i].node);
    CHECK(back[i].compressible == records[i].compressible);
    CHECK(back[i].action == records[i].action);
    CHECK(back[i].subtree == records[i].subtree);
    CHECK(back[i].bound == records[i].bound);
  }
}

TEST_CASE("horizon-infinity final size is ordering-invariant on random cases") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto c = testing::random_sim_case(seed);
    std::optional<long long> expect;
    for (OrderingKind k : {OrderingKind::random_shuffle, OrderingKind::dfs, OrderingKind::node_id,
                           OrderingKind::subtree_size, OrderingKind::gap, OrderingKind::expert}) {
      auto traj = simulate(c.tree, c.records, {k, seed}, std::nullopt);
      if (!expect)
        expect = traj.final_size;
      else
        CHECK(*expect == traj.final_size);
      // Conservation along the way: sizes never increase.
      long long prev = traj.initial_size;
      for (const auto& s : traj.steps) {
        CHECK(s.size_after <= prev);
        prev = s.size_after;
      }
      CHECK(traj.final_size == prev);
    }
  }
}

TEST_CASE("expert ordering dominates the others on most random cases") {
  int trials = 0, expert_best = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto c = testing::random_sim_case(seed);
    double total = 0;
    for (const auto& r : c.records) total += r.time_s;
    const double horizon = 0.3 * total;
    if (horizon <= 0) continue;
    const double expert = auc_percent(simulate(c.tree, c.records, {OrderingKind::expert, seed}, horizon));
    CHECK(expert >= 0.0);
    CHECK(expert <= 100.0);
    bool best = true;
    for (OrderingKind k : {OrderingKind::random_shuffle, OrderingKind::dfs, OrderingKind::node_id,
                           OrderingKind::subtree_size, OrderingKind::gap}) {
      const double other = auc_percent(simulate(c.tree, c.records, {k, seed}, horizon));
      CHECK(other >= 0.0);
      CHECK(other <= 100.0);
      if (expert > other) best = false;
    }
    ++trials;
    if (best) ++expert_best;
  }
  CHECK(trials == 50);
  CHECK(expert_best >= 45);  // 90%
}
