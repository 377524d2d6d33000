#include "treecomp/compress.hpp"

#include <json.hpp>
#include <sstream>

namespace treecomp {

using nlohmann::json;

namespace {

json disjunction_json(const Disjunction& d) {
  json pi = json::object();
  for (const auto& [j, a] : d.coeffs) pi[std::to_string(j)] = a;
  return json{{"pi", pi}, {"pi0", d.offset}};
}

const char* action_name(StepAction a) {
  switch (a) {
    case StepAction::drop:
      return "drop";
    case StepAction::replace:
      return "replace";
    default:
      return "skip";
  }
}

}  // namespace

std::string CompressionLog::to_jsonl() const {
  std::ostringstream os;
  json header;
  header["type"] = "compression-log";
  header["method"] = method;
  header["initial_size"] = initial_size;
  header["final_size"] = final_size;
  header["initial_bound"] = initial_bound.str();
  header["final_bound"] = final_bound.str();
  header["hit_global_limit"] = hit_global_limit;
  header["total_time_s"] = total_time_s;
  os << header.dump() << "\n";
  for (const auto& s : steps) {
    json j;
    j["node"] = s.node;
    j["action"] = action_name(s.action);
    if (s.disjunction) j["disjunction"] = disjunction_json(*s.disjunction);
    j["time_s"] = s.time_s;
    j["size_before"] = s.size_before;
    j["size_after"] = s.size_after;
    j["bound_before"] = s.bound_before.str();
    j["bound_after"] = s.bound_after.str();
    if (s.timed_out) j["timed_out"] = true;
    os << j.dump() << "\n";
  }
  return os.str();
}

std::optional<BbTree> try_drop(const BbTree& tree, NodeId v) {
  const BbNode& nd = tree.node(v);
  if (nd.is_leaf()) return std::nullopt;  // subtree of size 1 cannot shrink
  if (!(nd.lp_value >= tree.dual_bound())) return std::nullopt;
  return drop(tree, v);
}

std::pair<BbTree, CompressionLog> compress_tree(const BbTree& input, const CompressMode& mode,
                                                const LpContext& ctx, const Stopwatch* watch,
                                                const OrderingHook& ordering) {
  const LpContext exact = ctx.with_backend(Backend::exact);
  BbTree working = input;
  CompressionLog log;
  log.method = mode.method == CompressMethod::exact
                   ? "exact"
                   : (mode.method == CompressMethod::heuristic ? "heuristic" : "drop");

  std::unique_ptr<Stopwatch> own_watch;
  if (!watch) {
    own_watch = std::make_unique<Stopwatch>(ctx, /*virtual_clock=*/false);
    watch = own_watch.get();
  }
  Budget global{mode.global_limit_s, watch};

  // Compression reasons about exact values; refresh any float-era caches.
  if (!working.values_exact()) {
    for (const auto& [id, nd] : working.nodes()) working.revalidate_node(id, exact);
    working.make_leaf_values_exact(exact);
  }

  ExtValue d = working.dual_bound();
  log.initial_size = working.size();
  log.initial_bound = d;

  std::vector<NodeId> queue = ordering ? ordering(working) : working.preorder();
  const double t_start = watch->elapsed_s();

  for (NodeId v : queue) {
    if (global.exhausted()) {
      log.hit_global_limit = true;
      break;
    }
    if (!working.contains(v)) continue;  // removed by an earlier step
    if (working.node(v).is_leaf()) continue;

    const double t0 = watch->elapsed_s();
    CompressionStep step;
    step.node = v;
    step.size_before = working.size();
    step.bound_before = d;

    const BbNode& nd = working.node(v);
    if (nd.lp_value >= d) {
      working.drop_in_place(v);
      d = working.dual_bound();
      step.action = StepAction::drop;
      step.size_after = working.size();
      step.bound_after = d;
      step.time_s = watch->elapsed_s() - t0;
      if (!(step.size_after < step.size_before) || step.bound_after < step.bound_before)
        throw std::logic_error("compression step violated its contract");
      log.steps.push_back(std::move(step));
      continue;
    }

    bool searched = false;
    std::optional<Disjunction> found;
    bool timed_out = false;
    if (mode.method != CompressMethod::drop_only && working.subtree_size(v) - 1 > 2) {
      searched = true;
      std::optional<double> deadline = mode.global_limit_s;
      if (mode.per_node_limit_s) {
        const double per = watch->elapsed_s() + *mode.per_node_limit_s;
        deadline = deadline ? std::min(*deadline, per) : per;
      }
      const LinearSystem qv = working.node_polyhedron(v);
      if (mode.method == CompressMethod::exact) {
        DisjunctionMipConfig cfg;
        cfg.support_limit = mode.support_limit;
        cfg.coefficient_bound = mode.coefficient_bound;
        cfg.delta_accept = mode.delta_accept;
        cfg.node_limit = mode.mip_node_limit;
        cfg.deadline_s = deadline;
        auto res = find_disjunction_exact(qv, working.instance().objective, d,
                                          working.instance().integrality, cfg, exact, watch);
        found = res.found;
        timed_out = res.timed_out;
      } else {
        HeuristicConfig cfg;
        cfg.max_iterations = mode.heur_max_iterations;
        cfg.coefficient_cap = mode.coefficient_bound;
        cfg.deadline_s = deadline;
        auto res = find_disjunction_heuristic(qv, working.instance().objective, d,
                                              working.instance().integrality, cfg, ctx, watch);
        found = res.found;
        timed_out = res.timed_out;
      }
    }

    if (found) {
      working.replace_in_place(v, *found, exact);
      const ExtValue d_new = working.dual_bound();
      step.action = StepAction::replace;
      step.disjunction = found;
      step.size_after = working.size();
      step.bound_after = d_new;
      step.time_s = watch->elapsed_s() - t0;
      if (!(step.size_after < step.size_before) || d_new < d)
        throw std::logic_error("replacement step violated its contract");
      d = d_new;
    } else {
      step.action = StepAction::skip;
      step.size_after = working.size();
      step.bound_after = d;
      step.time_s = watch->elapsed_s() - t0;
      step.timed_out = timed_out;
      (void)searched;
    }
    log.steps.push_back(std::move(step));
  }

  log.final_size = working.size();
  log.final_bound = d;
  log.total_time_s = watch->elapsed_s() - t_start;
  return {std::move(working), std::move(log)};
}

}  // namespace treecomp
