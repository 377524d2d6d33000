#include "doctest.h"
#include "treecomp/branching.hpp"
#include "treecomp/fixtures.hpp"

using namespace treecomp;

namespace {
LpContext exact_ctx() { return LpContext{}; }

std::shared_ptr<const Instance> box_fifth_inst() {
  return std::make_shared<const Instance>(fixtures::box_instance(Rational(1, 5), "box"));
}
}  // namespace

TEST_CASE("strong branching scores on the box root") {
  auto t = BbTree::make_root(box_fifth_inst(), exact_ctx());
  auto cands = fractional_candidates(t, 0, 1e-6);
  REQUIRE(cands == std::vector<Index>{0, 1});
  auto scores = strong_branch_scores(t, 0, cands, exact_ctx());
  REQUIRE(scores.size() == 2);
  CHECK(scores[0].left == ExtValue::of(Rational(-1, 5)));
  CHECK(scores[0].right.is_pos_inf());
  // Symmetric box: identical score pairs.
  CHECK(scores[1].left == scores[0].left);
  CHECK(scores[1].right == scores[0].right);
}

TEST_CASE("integral LP point yields no candidates") {
  auto inst = std::make_shared<const Instance>(fixtures::box_instance(Rational(2), "intbox"));
  auto t = BbTree::make_root(inst, exact_ctx());
  CHECK(fractional_candidates(t, 0, 1e-6).empty());
}

TEST_CASE("strong branching rejects non-leaves and infeasible nodes") {
  auto fx = fixtures::box_fifth(exact_ctx());
  CHECK_THROWS_AS(strong_branch_scores(fx.tree, 0, {0}, exact_ctx()), NodeNotLeaf);
  CHECK_THROWS_AS(strong_branch_scores(fx.tree, 5, {0}, exact_ctx()), NodeInfeasible);
}

TEST_CASE("FSB on the box proves bound 0 with a 5-node tree") {
  BranchingConfig cfg;
  cfg.rule = BranchRule::fsb;
  auto res = generate_tree(box_fifth_inst(), cfg, 1, exact_ctx());
  CHECK(res.tree.size() == 5);
  CHECK(res.tree.dual_bound() == ExtValue::of(Rational(0)));
  CHECK(!res.log.hit_node_limit);
  CHECK(res.log.sb_lp_solves == 2 * res.log.sb_evaluations);
  // Deterministic tie-break: lowest index wins, so the root splits on x0.
  CHECK(res.log.entries[0].branch_var == 0);
}

TEST_CASE("infeasible root gives a 1-node tree with +inf bound") {
  Instance raw = fixtures::box_instance(Rational(1, 5), "inf");
  raw.system.add_row(make_row({{0, Rational(-1)}}, Rational(-1)));  // x0 >= 1
  auto res = generate_tree(std::make_shared<const Instance>(std::move(raw)), BranchingConfig{}, 1,
                           exact_ctx());
  CHECK(res.tree.size() == 1);
  CHECK(res.tree.dual_bound().is_pos_inf());
}

TEST_CASE("node limit 1 keeps the root only") {
  BranchingConfig cfg;
  cfg.node_limit = 1;
  auto res = generate_tree(box_fifth_inst(), cfg, 1, exact_ctx());
  CHECK(res.tree.size() == 1);
  CHECK(res.log.hit_node_limit);
}

TEST_CASE("unbounded root aborts") {
  Instance raw;
  raw.name = "unb";
  raw.system.num_vars = 1;
  raw.system.lower = {ExtValue::neg_inf()};
  raw.system.upper = {ExtValue::of(Rational(0))};
  raw.system.add_row(make_row({{0, Rational(1)}}, Rational(0)));
  raw.objective.resize(1);
  raw.objective << Rational(1);
  raw.integrality = {true};
  CHECK_THROWS_AS(
      generate_tree(std::make_shared<const Instance>(std::move(raw)), BranchingConfig{}, 1, exact_ctx()),
      RootUnbounded);
}

TEST_CASE("no integer variables aborts") {
  Instance raw = fixtures::box_instance(Rational(1, 5), "cont");
  raw.integrality = {false, false};
  CHECK_THROWS_AS(
      generate_tree(std::make_shared<const Instance>(std::move(raw)), BranchingConfig{}, 1, exact_ctx()),
      NoIntegerVariables);
}

TEST_CASE("FSB choice dominates every candidate score") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto inst = std::make_shared<const Instance>(fixtures::random_ip(seed, 3, 4, 3));
    Instance with_opt = *inst;
    with_opt.known_optimal = fixtures::brute_integer_optimum(*inst);
    auto shared = std::make_shared<const Instance>(std::move(with_opt));
    BranchingConfig cfg;
    cfg.node_limit = 200;
    auto res = generate_tree(shared, cfg, seed, exact_ctx());
    // Re-play each branching decision and check dominance.
    // Rebuild the tree incrementally to query pre-branch states is costly;
    // instead check on the final tree: for each logged entry the chosen
    // variable's score is >= every candidate's, evaluated on Q(node).
    int checked = 0;
    for (const auto& e : res.log.entries) {
      if (checked >= 3) break;  // a few nodes suffice
      if (!res.tree.contains(e.node)) continue;
      // Recreate the leaf state: detach children temporarily via a copy.
      BbTree copy = res.tree;
      copy.drop_in_place(e.node);
      auto cands = fractional_candidates(copy, e.node, cfg.integrality_tol);
      if (cands.empty()) continue;
      auto scores = strong_branch_scores(copy, e.node, cands, exact_ctx());
      ExtValue chosen_score;
      bool found = false;
      for (const auto& s : scores)
        if (s.var == e.branch_var) {
          chosen_score = min(s.left, s.right);
          found = true;
        }
      REQUIRE(found);
      for (const auto& s : scores) CHECK(chosen_score >= min(s.left, s.right));
      ++checked;
    }
  }
}

TEST_CASE("pruning soundness: complete trees certify the integer optimum") {
  for (std::uint64_t seed = 11; seed <= 22; ++seed) {
    auto base = fixtures::random_ip(seed, 3, 3, 3);
    const ExtValue zstar = fixtures::brute_integer_optimum(base);
    base.known_optimal = zstar;
    auto inst = std::make_shared<const Instance>(std::move(base));
    BranchingConfig cfg;
    cfg.node_limit = 2000;
    auto res = generate_tree(inst, cfg, seed, exact_ctx());
    CHECK(res.tree.dual_bound() <= zstar);
    if (!res.log.hit_node_limit) CHECK(res.tree.dual_bound() == zstar);
  }
}

TEST_CASE("best-bound selection explores nondecreasing LP values") {
  auto base = fixtures::random_ip(31, 4, 4, 3);
  base.known_optimal = fixtures::brute_integer_optimum(base);
  auto inst = std::make_shared<const Instance>(std::move(base));
  BranchingConfig cfg;
  cfg.rule = BranchRule::fsb;
  cfg.plunging = false;
  cfg.node_limit = 500;
  auto res = generate_tree(inst, cfg, 1, exact_ctx());
  ExtValue prev = ExtValue::neg_inf();
  for (const auto& e : res.log.entries) {
    const ExtValue v = res.tree.node(e.node).lp_value;
    CHECK(prev <= v);
    prev = v;
  }
}

TEST_CASE("RB with everything unreliable matches FSB at the root") {
  auto inst = box_fifth_inst();
  auto t = BbTree::make_root(inst, exact_ctx());
  PseudocostTable pc(2);
  BranchingConfig cfg;
  cfg.rule = BranchRule::rb;
  Index var = rb_select_variable(t, 0, pc, cfg, exact_ctx());
  CHECK(var == 0);  // same deterministic choice as FSB
  CHECK(pc.up_count[0] == 1);
  CHECK(pc.down_count[0] == 1);
}

TEST_CASE("RB threshold 0 never strong-branches") {
  auto inst = box_fifth_inst();
  auto t = BbTree::make_root(inst, exact_ctx());
  PseudocostTable pc(2);
  BranchingConfig cfg;
  cfg.rule = BranchRule::rb;
  cfg.reliability_threshold = 0;
  GenerationLog::Entry e;
  rb_select_variable(t, 0, pc, cfg, exact_ctx(), &e);
  CHECK(e.sb_evaluations == 0);
  CHECK(e.pseudocost_estimates == 2);
  CHECK(pc.up_count[0] == 0);
}

TEST_CASE("RB stops strong-branching a variable after 10 evaluations") {
  auto inst = box_fifth_inst();
  auto t = BbTree::make_root(inst, exact_ctx());
  PseudocostTable pc(2);
  BranchingConfig cfg;
  cfg.rule = BranchRule::rb;
  for (int i = 0; i < 10; ++i) {
    GenerationLog::Entry e;
    rb_select_variable(t, 0, pc, cfg, exact_ctx(), &e);
    CHECK(e.sb_evaluations == 2);  // both candidates unreliable
  }
  CHECK(pc.up_count[0] == 10);
  GenerationLog::Entry e11;
  rb_select_variable(t, 0, pc, cfg, exact_ctx(), &e11);
  CHECK(e11.sb_evaluations == 0);
  CHECK(e11.pseudocost_estimates == 2);
}

TEST_CASE("plunging explores a child of the last branched node") {
  auto base = fixtures::random_ip(47, 4, 4, 3);
  base.known_optimal = fixtures::brute_integer_optimum(base);
  auto inst = std::make_shared<const Instance>(std::move(base));
  BranchingConfig cfg;
  cfg.rule = BranchRule::rb;
  cfg.plunging = true;
  cfg.node_limit = 400;
  auto res = generate_tree(inst, cfg, 1, exact_ctx());
  int plunges = 0;
  for (std::size_t i = 1; i < res.log.entries.size(); ++i) {
    const NodeId prev = res.log.entries[i - 1].node;
    const NodeId cur = res.log.entries[i].node;
    if (res.tree.contains(cur) && res.tree.node(cur).parent == prev) ++plunges;
  }
  if (res.log.entries.size() > 2) CHECK(plunges > 0);
}

TEST_CASE("generation is deterministic") {
  auto base = fixtures::random_ip(53, 4, 5, 3);
  base.known_optimal = fixtures::brute_integer_optimum(base);
  auto inst = std::make_shared<const Instance>(std::move(base));
  BranchingConfig cfg;
  cfg.rule = BranchRule::rb;
  cfg.plunging = true;
  cfg.node_limit = 300;
  auto a = generate_tree(inst, cfg, 7, exact_ctx());
  auto b = generate_tree(inst, cfg, 7, exact_ctx());
  CHECK(a.tree == b.tree);
}
