#include <random>

#include "doctest.h"
#include "treecomp/fixtures.hpp"
#include "treecomp/tree.hpp"

using namespace treecomp;

namespace {
LpContext exact_ctx() { return LpContext{}; }
}

TEST_CASE("seven-node demo tree: polyhedra, values and dual bound") {
  auto fx = fixtures::box_fifth(exact_ctx());
  const BbTree& t = fx.tree;
  REQUIRE(t.size() == 7);
  CHECK(t.subtree_size(t.root_id()) == 7);

  // Root polyhedron is exactly the instance box.
  auto rootsys = t.node_polyhedron(0);
  CHECK(rootsys.num_rows() == 0);

  // Left child {0} x [0,1/5]: LP value -1/5 at (0,1/5).
  CHECK(t.node(1).lp_value == ExtValue::of(Rational(-1, 5)));
  CHECK((*t.node(1).lp_point)(0) == Rational(0));
  CHECK((*t.node(1).lp_point)(1) == Rational(1, 5));

  // Right child is empty, and so are its children under the repeated split.
  CHECK(t.node(2).lp_value.is_pos_inf());
  CHECK(t.node(5).lp_value.is_pos_inf());
  CHECK(t.node(6).lp_value.is_pos_inf());

  // Deepest feasible leaf is {0} with value 0; the x2 >= 1 side is empty.
  CHECK(t.node(3).lp_value == ExtValue::of(Rational(0)));
  CHECK(t.node(4).lp_value.is_pos_inf());

  CHECK(t.dual_bound() == ExtValue::of(Rational(0)));
  CHECK(t.node(0).lp_value == ExtValue::of(Rational(-2, 5)));
}

TEST_CASE("single-node tree over the box has bound -2/5") {
  auto inst = std::make_shared<const Instance>(fixtures::box_instance(Rational(1, 5), "b"));
  auto t = BbTree::make_root(inst, exact_ctx());
  CHECK(t.size() == 1);
  CHECK(t.dual_bound() == ExtValue::of(Rational(-2, 5)));
}

TEST_CASE("all leaves infeasible gives +inf dual bound") {
  // Box [2/5,3/5]^2: 3*x0 ranges over [6/5,9/5], strictly inside (1,2),
  // so the split (3x0 <= 1) v (3x0 >= 2) empties both sides.
  Instance raw;
  raw.name = "strip";
  raw.system = LinearSystem::box({ExtValue::of(Rational(2, 5)), ExtValue::of(Rational(2, 5))},
                                 {ExtValue::of(Rational(3, 5)), ExtValue::of(Rational(3, 5))});
  raw.objective.resize(2);
  raw.objective << Rational(-1), Rational(-1);
  raw.integrality = {true, true};
  auto inst = std::make_shared<const Instance>(std::move(raw));
  auto t = BbTree::make_root(inst, exact_ctx());
  t.branch_leaf(t.root_id(), make_disjunction({{0, 3}}, 1), exact_ctx());
  CHECK(t.size() == 3);
  CHECK(t.dual_bound().is_pos_inf());
}

TEST_CASE("drop: right child, leaf no-op, root") {
  auto fx = fixtures::box_fifth(exact_ctx());
  SUBCASE("dropping the empty right subtree keeps ids and bound") {
    BbTree d = drop(fx.tree, 2);
    CHECK(d.size() == 5);
    CHECK(d.node(2).is_leaf());
    CHECK(d.contains(3));
    CHECK(d.contains(4));
    CHECK(!d.contains(5));
    CHECK(d.dual_bound() == ExtValue::of(Rational(0)));
    CHECK(is_valid_compression_step(fx.tree, d));
  }
  SUBCASE("dropping a leaf changes nothing") {
    BbTree d = drop(fx.tree, 3);
    CHECK(d.size() == fx.tree.size());
    CHECK(!is_valid_compression_step(fx.tree, d));  // size must strictly shrink
  }
  SUBCASE("dropping the root gives the single-node tree") {
    BbTree d = drop(fx.tree, 0);
    CHECK(d.size() == 1);
    CHECK(d.dual_bound() == ExtValue::of(Rational(-2, 5)));
  }
  SUBCASE("unknown node raises") { CHECK_THROWS_AS(drop(fx.tree, 77), UnknownNode); }
}

TEST_CASE("replace at the root with the all-ones direction") {
  auto fx = fixtures::box_fifth(exact_ctx());
  auto d = make_disjunction({{0, 1}, {1, 1}}, 0);
  BbTree r = replace(fx.tree, 0, d, exact_ctx());
  CHECK(r.size() == 3);
  const BbNode& root = r.node(0);
  // Left child {x0+x1 <= 0} = {0}: value 0. Right child empty.
  CHECK(r.node(root.child_left).lp_value == ExtValue::of(Rational(0)));
  CHECK(r.node(root.child_right).lp_value.is_pos_inf());
  CHECK(r.dual_bound() == ExtValue::of(Rational(0)));
  CHECK(is_valid_compression_step(fx.tree, r));
  // Fresh ids for the new leaves.
  CHECK(root.child_left >= fx.tree.next_id());
}

TEST_CASE("replace on the half box deteriorates the bound to -1") {
  auto fx = fixtures::box_half(exact_ctx());
  auto d = make_disjunction({{0, 1}, {1, 1}}, 0);
  BbTree r = replace(fx.tree, 0, d, exact_ctx());
  CHECK(r.size() == 3);
  // (1/2,1/2) sits on the x0+x1 >= 1 side with value -1.
  CHECK(r.dual_bound() == ExtValue::of(Rational(-1)));
  CHECK_FALSE(is_valid_compression_step(fx.tree, r));
}

TEST_CASE("replace improves the triangle bound from -1/2 to 0") {
  auto fx = fixtures::triangle(exact_ctx());
  CHECK(fx.tree.dual_bound() == ExtValue::of(Rational(-1, 2)));
  auto d = make_disjunction({{0, 1}, {1, 1}}, 0);
  BbTree r = replace(fx.tree, 0, d, exact_ctx());
  CHECK(r.dual_bound() == ExtValue::of(Rational(0)));
  CHECK(is_valid_compression_step(fx.tree, r));
}

TEST_CASE("replace refuses leaves") {
  auto fx = fixtures::box_fifth(exact_ctx());
  CHECK_THROWS_AS(replace(fx.tree, 3, unit_disjunction(0, 0), exact_ctx()), NodeIsLeaf);
}

TEST_CASE("replace locality: nodes outside the subtree are untouched") {
  auto fx = fixtures::box_fifth(exact_ctx());
  BbTree r = replace(fx.tree, 1, unit_disjunction(1, 0), exact_ctx());
  // Node 2's subtree is unaffected, ids and cached values identical.
  for (NodeId v : {0LL, 2LL, 5LL, 6LL}) {
    CHECK(r.contains(v));
    CHECK(r.node(v).lp_value == fx.tree.node(v).lp_value);
  }
  CHECK(r.node(2).child_left == 5);
}

TEST_CASE("size arithmetic for drop and replace") {
  auto fx = fixtures::box_fifth(exact_ctx());
  for (NodeId v : {0LL, 1LL, 2LL}) {
    long long sub = fx.tree.subtree_size(v);
    CHECK(drop(fx.tree, v).size() == fx.tree.size() - (sub - 1));
    BbTree r = replace(fx.tree, v, make_disjunction({{0, 1}, {1, 1}}, 0), exact_ctx());
    CHECK(r.size() == fx.tree.size() - (sub - 1) + 2);
  }
}

TEST_CASE("monotonicity: child lp values never drop below the parent") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = std::make_shared<const Instance>(fixtures::random_ip(seed, 3, 3, 3));
    auto t = BbTree::make_root(inst, exact_ctx());
    // Grow a few levels of unit splits by hand.
    for (int round = 0; round < 3; ++round) {
      auto ls = t.leaves();
      for (NodeId v : ls) {
        const BbNode& nd = t.node(v);
        if (!nd.lp_point) continue;
        Index var = static_cast<Index>(rng() % 3);
        long long off = (*nd.lp_point)(var).floor_ll();
        t.branch_leaf(v, unit_disjunction(var, off), exact_ctx());
        break;  // one branch per round keeps sizes small
      }
    }
    for (const auto& [id, nd] : t.nodes()) {
      if (nd.parent < 0) continue;
      CHECK(nd.lp_value >= t.node(nd.parent).lp_value);
    }
  }
}

TEST_CASE("serialization round-trips and validates the instance hash") {
  auto fx = fixtures::box_fifth(exact_ctx());
  std::string blob = fx.tree.serialize();
  BbTree back = BbTree::deserialize(blob, fx.instance);
  CHECK(back == fx.tree);
  CHECK(back.values_exact());

  // Cached values revalidate exactly.
  BbTree reval = back;
  for (const auto& [id, nd] : back.nodes()) {
    reval.revalidate_node(id, exact_ctx());
    CHECK(reval.node(id).lp_value == nd.lp_value);
  }

  auto other = std::make_shared<const Instance>(fixtures::box_instance(Rational(1, 2), "o"));
  CHECK_THROWS_AS(BbTree::deserialize(blob, other), InstanceMismatch);
  CHECK_THROWS_AS(BbTree::deserialize("junk\n", fx.instance), SchemaError);
}

TEST_CASE("dual bound of a tree with an unbounded leaf is -inf") {
  Instance raw;
  raw.name = "unb";
  raw.system.num_vars = 2;
  raw.system.lower = {ExtValue::of(Rational(0)), ExtValue::of(Rational(0))};
  raw.system.upper = {ExtValue::pos_inf(), ExtValue::pos_inf()};
  raw.system.add_row(make_row({{0, Rational(1)}, {1, Rational(-1)}}, Rational(0)));
  raw.objective.resize(2);
  raw.objective << Rational(-1), Rational(0);
  raw.integrality = {true, true};
  auto inst = std::make_shared<const Instance>(std::move(raw));
  auto t = BbTree::make_root(inst, exact_ctx());
  CHECK(t.dual_bound().is_neg_inf());
}
