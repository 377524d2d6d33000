#include "treecomp/branching.hpp"

#include <json.hpp>

namespace treecomp {

using nlohmann::json;

std::string GenerationLog::to_json() const {
  json j;
  j["rule"] = rule;
  j["plunging"] = plunging;
  j["seed"] = seed;
  j["nodes_created"] = nodes_created;
  j["sb_evaluations"] = sb_evaluations;
  j["sb_lp_solves"] = sb_lp_solves;
  j["hit_node_limit"] = hit_node_limit;
  json arr = json::array();
  for (const auto& e : entries) {
    arr.push_back(json{{"node", e.node},
                       {"branch_var", e.branch_var},
                       {"candidates", e.candidates},
                       {"sb_evaluations", e.sb_evaluations},
                       {"pseudocost_estimates", e.pseudocost_estimates}});
  }
  j["decisions"] = arr;
  return j.dump(2);
}

namespace {

bool is_fractional(const Rational& x, const Rational& tol) {
  const Rational f = x - x.floor();
  return f > tol && f < Rational(1) - tol;
}

ExtValue side_value(const BbTree& tree, NodeId v, Index var, long long offset, Side side,
                    const LpContext& ctx) {
  LinearSystem sys = tree.node_polyhedron(v);
  sys.add_row(BranchConstraint{unit_disjunction(var, offset), side}.as_row());
  auto res = lp_solve(sys, tree.instance().objective, ctx);
  return res.objective_bound();
}

}  // namespace

std::vector<Index> fractional_candidates(const BbTree& tree, NodeId v, double integrality_tol) {
  const BbNode& nd = tree.node(v);
  if (!nd.lp_point) return {};
  const Rational tol = Rational::from_double(integrality_tol);
  std::vector<Index> out;
  const RatVec& x = *nd.lp_point;
  for (Index j = 0; j < tree.instance().num_vars(); ++j) {
    if (!tree.instance().integrality[static_cast<std::size_t>(j)]) continue;
    if (is_fractional(x(j), tol)) out.push_back(j);
  }
  return out;
}

std::vector<StrongScore> strong_branch_scores(const BbTree& tree, NodeId v,
                                              const std::vector<Index>& candidates,
                                              const LpContext& ctx) {
  const BbNode& nd = tree.node(v);
  if (!nd.is_leaf()) throw NodeNotLeaf(v);
  if (!nd.lp_point) throw NodeInfeasible(v);
  const RatVec& x = *nd.lp_point;
  std::vector<StrongScore> out;
  out.reserve(candidates.size());
  for (Index j : candidates) {
    const long long off = x(j).floor_ll();
    StrongScore s;
    s.var = j;
    s.left = side_value(tree, v, j, off, Side::left, ctx);
    s.right = side_value(tree, v, j, off, Side::right, ctx);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

struct ScoredCandidate {
  Index var = -1;
  ExtValue primary;    // min of the two side values (higher is better)
  ExtValue secondary;  // max of the two side values (tie-break)
};

// Best candidate: max primary, then max secondary, then lowest index.
Index pick_best(const std::vector<ScoredCandidate>& scored) {
  Index best = -1;
  const ScoredCandidate* bestp = nullptr;
  for (const auto& s : scored) {
    if (!bestp || s.primary > bestp->primary ||
        (s.primary == bestp->primary && s.secondary > bestp->secondary)) {
      best = s.var;
      bestp = &s;
    }
  }
  return best;
}

void update_pseudocosts(PseudocostTable& pc, Index j, const ExtValue& node_val,
                        const ExtValue& left, const ExtValue& right, const Rational& frac) {
  const auto ju = static_cast<std::size_t>(j);
  // Counts track evaluations; sums only accumulate finite degradations.
  pc.down_count[ju] += 1;
  pc.up_count[ju] += 1;
  if (left.is_finite() && node_val.is_finite() && !frac.is_zero()) {
    Rational per_unit = (left.finite() - node_val.finite()) / frac;
    if (per_unit.sign() < 0) per_unit = Rational(0);
    pc.down_sum[ju] += per_unit;
  }
  const Rational up_frac = Rational(1) - frac;
  if (right.is_finite() && node_val.is_finite() && !up_frac.is_zero()) {
    Rational per_unit = (right.finite() - node_val.finite()) / up_frac;
    if (per_unit.sign() < 0) per_unit = Rational(0);
    pc.up_sum[ju] += per_unit;
  }
}

}  // namespace

Index rb_select_variable(const BbTree& tree, NodeId v, PseudocostTable& pseudocosts,
                         const BranchingConfig& config, const LpContext& ctx,
                         GenerationLog::Entry* log_entry) {
  const BbNode& nd = tree.node(v);
  if (!nd.is_leaf()) throw NodeNotLeaf(v);
  if (!nd.lp_point) throw NodeInfeasible(v);
  auto candidates = fractional_candidates(tree, v, config.integrality_tol);
  if (candidates.empty()) throw std::logic_error("rb_select_variable: no fractional candidates");
  const RatVec& x = *nd.lp_point;
  std::vector<ScoredCandidate> scored;
  scored.reserve(candidates.size());
  for (Index j : candidates) {
    ScoredCandidate sc;
    sc.var = j;
    if (!pseudocosts.reliable(j, config.reliability_threshold)) {
      auto sb = strong_branch_scores(tree, v, {j}, ctx)[0];
      const Rational frac = x(j) - x(j).floor();
      update_pseudocosts(pseudocosts, j, nd.lp_value, sb.left, sb.right, frac);
      sc.primary = min(sb.left, sb.right);
      sc.secondary = max(sb.left, sb.right);
      if (log_entry) {
        log_entry->sb_evaluations += 1;
      }
    } else {
      const Rational frac = x(j) - x(j).floor();
      const Rational down_est = pseudocosts.down_avg(j) * frac;
      const Rational up_est = pseudocosts.up_avg(j) * (Rational(1) - frac);
      const Rational base = nd.lp_value.is_finite() ? nd.lp_value.finite() : Rational(0);
      ExtValue d = ExtValue::of(base + down_est);
      ExtValue u = ExtValue::of(base + up_est);
      sc.primary = min(d, u);
      sc.secondary = max(d, u);
      if (log_entry) log_entry->pseudocost_estimates += 1;
    }
    scored.push_back(std::move(sc));
  }
  return pick_best(scored);
}

namespace {

enum class LeafState { open, closed };

struct OpenQueue {
  std::set<std::pair<ExtValue, NodeId>> by_bound;

  void insert(const ExtValue& val, NodeId id) { by_bound.emplace(val, id); }
  void erase(const ExtValue& val, NodeId id) { by_bound.erase({val, id}); }
  bool contains(const ExtValue& val, NodeId id) const { return by_bound.count({val, id}) > 0; }
  bool empty() const { return by_bound.empty(); }
  NodeId best() const { return by_bound.begin()->second; }
};

}  // namespace

GenerationResult generate_tree(std::shared_ptr<const Instance> instance,
                               const BranchingConfig& config, std::uint64_t seed,
                               const LpContext& ctx) {
  config.validate();
  instance->validate();
  if (!instance->has_integer_vars()) throw NoIntegerVariables();

  GenerationResult out{BbTree::make_root(instance, ctx), {}};
  BbTree& tree = out.tree;
  GenerationLog& log = out.log;
  log.rule = config.rule == BranchRule::fsb ? "fsb" : "rb";
  log.plunging = config.plunging;
  log.seed = seed;

  if (tree.node(tree.root_id()).lp_value.is_neg_inf()) throw RootUnbounded();

  std::optional<ExtValue> cutoff;
  if (config.prune_uses_incumbent && instance->known_optimal && instance->known_optimal->is_finite()) {
    Rational z = instance->known_optimal->finite();
    if (ctx.backend == Backend::floating) {
      Rational slack = Rational::from_double(1e-9);
      Rational scale = z.abs() > Rational(1) ? z.abs() : Rational(1);
      z -= slack * scale;
    }
    cutoff = ExtValue::of(z);
  }

  const Rational tol = Rational::from_double(config.integrality_tol);
  auto classify_open = [&](NodeId v) -> bool {
    const BbNode& nd = tree.node(v);
    if (!nd.lp_point) return false;                       // infeasible
    if (cutoff && nd.lp_value >= *cutoff) return false;   // pruned by bound
    for (Index j = 0; j < instance->num_vars(); ++j) {
      if (!instance->integrality[static_cast<std::size_t>(j)]) continue;
      if (is_fractional((*nd.lp_point)(j), tol)) return true;
    }
    return false;  // integral point
  };

  OpenQueue open;
  if (classify_open(tree.root_id())) open.insert(tree.node(tree.root_id()).lp_value, tree.root_id());

  PseudocostTable pseudocosts(instance->num_vars());
  NodeId last_branched = -1;

  while (!open.empty()) {
    if (tree.size() + 2 > config.node_limit) {
      log.hit_node_limit = true;
      break;
    }
    // Node selection: plunge into the most recent children when allowed,
    // otherwise best bound (minimal LP value, ties to the lowest id).
    NodeId v = -1;
    if (config.plunging && last_branched >= 0 && tree.contains(last_branched)) {
      const BbNode& parent = tree.node(last_branched);
      NodeId cl = parent.child_left, cr = parent.child_right;
      const bool l_open = cl >= 0 && open.contains(tree.node(cl).lp_value, cl);
      const bool r_open = cr >= 0 && open.contains(tree.node(cr).lp_value, cr);
      if (l_open && r_open)
        v = tree.node(cl).lp_value <= tree.node(cr).lp_value ? cl : cr;
      else if (l_open)
        v = cl;
      else if (r_open)
        v = cr;
    }
    if (v < 0) v = open.best();
    open.erase(tree.node(v).lp_value, v);

    GenerationLog::Entry entry;
    entry.node = v;
    auto candidates = fractional_candidates(tree, v, config.integrality_tol);
    entry.candidates = static_cast<int>(candidates.size());

    Index var = -1;
    if (config.rule == BranchRule::fsb) {
      auto scores = strong_branch_scores(tree, v, candidates, ctx);
      entry.sb_evaluations = static_cast<int>(scores.size());
      std::vector<ScoredCandidate> scored;
      scored.reserve(scores.size());
      for (const auto& s : scores)
        scored.push_back({s.var, min(s.left, s.right), max(s.left, s.right)});
      var = pick_best(scored);
    } else {
      var = rb_select_variable(tree, v, pseudocosts, config, ctx, &entry);
    }
    entry.branch_var = var;
    log.sb_evaluations += entry.sb_evaluations;
    log.sb_lp_solves += 2LL * entry.sb_evaluations;
    log.entries.push_back(entry);

    const long long off = (*tree.node(v).lp_point)(var).floor_ll();
    auto [left, right] = tree.branch_leaf(v, unit_disjunction(var, off), ctx);
    log.nodes_created += 2;
    for (NodeId c : {left, right})
      if (classify_open(c)) open.insert(tree.node(c).lp_value, c);
    last_branched = v;
  }
  return out;
}

}  // namespace treecomp
