#include "treecomp/records.hpp"

#include <json.hpp>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace treecomp {

using nlohmann::json;

Ordering parse_ordering(const std::string& name, std::uint64_t seed) {
  if (name == "random") return {OrderingKind::random_shuffle, seed};
  if (name == "dfs") return {OrderingKind::dfs, seed};
  if (name == "nodeid" || name == "node-id" || name == "id") return {OrderingKind::node_id, seed};
  if (name == "subtree" || name == "subtreesize") return {OrderingKind::subtree_size, seed};
  if (name == "gap") return {OrderingKind::gap, seed};
  if (name == "expert") return {OrderingKind::expert, seed};
  throw std::invalid_argument("unknown ordering '" + name + "'");
}

std::string ordering_name(OrderingKind k) {
  switch (k) {
    case OrderingKind::random_shuffle:
      return "random";
    case OrderingKind::dfs:
      return "dfs";
    case OrderingKind::node_id:
      return "nodeid";
    case OrderingKind::subtree_size:
      return "subtree";
    case OrderingKind::gap:
      return "gap";
    default:
      return "expert";
  }
}

std::vector<NodeRecord> skeleton_records(const BbTree& tree) {
  std::vector<NodeRecord> out;
  for (const auto& [id, nd] : tree.nodes()) {
    if (nd.is_leaf()) continue;
    NodeRecord r;
    r.node = id;
    r.creation_index = id;
    r.subtree = tree.subtree_size(id);
    r.bound = nd.lp_value;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<NodeRecord> precompute_records(const BbTree& tree, const FinderChoice& finder,
                                           std::optional<double> per_node_limit_s,
                                           const LpContext& ctx, const Stopwatch* watch,
                                           int jobs) {
  std::vector<NodeRecord> out = skeleton_records(tree);
  const ExtValue d = tree.dual_bound();
  if (per_node_limit_s && *per_node_limit_s <= 0) return out;  // everything incompressible, zero time

  std::unique_ptr<Stopwatch> own_watch;
  if (!watch) {
    own_watch = std::make_unique<Stopwatch>(ctx, false);
    watch = own_watch.get();
  }

  auto work = [&](NodeRecord& r) {
    const BbNode& nd = tree.node(r.node);
    const double t0 = watch->elapsed_s();
    if (nd.lp_value >= d) {
      r.compressible = true;
      r.action = RecordAction::drop;
      r.time_s = watch->elapsed_s() - t0;
      return;
    }
    if (r.subtree - 1 <= 2) return;  // replacement cannot shrink this subtree
    const LinearSystem qv = tree.node_polyhedron(r.node);
    std::optional<double> deadline;
    if (per_node_limit_s) deadline = watch->elapsed_s() + *per_node_limit_s;
    std::optional<Disjunction> found;
    bool timed_out = false;
    if (finder.method == CompressMethod::exact) {
      DisjunctionMipConfig cfg;
      cfg.support_limit = finder.mode.support_limit;
      cfg.coefficient_bound = finder.mode.coefficient_bound;
      cfg.delta_accept = finder.mode.delta_accept;
      cfg.node_limit = finder.mode.mip_node_limit;
      cfg.deadline_s = deadline;
      auto res = find_disjunction_exact(qv, tree.instance().objective, d,
                                        tree.instance().integrality, cfg,
                                        ctx.with_backend(Backend::exact), watch);
      found = res.found;
      timed_out = res.timed_out;
    } else {
      HeuristicConfig cfg;
      cfg.max_iterations = finder.mode.heur_max_iterations;
      cfg.coefficient_cap = finder.mode.coefficient_bound;
      cfg.deadline_s = deadline;
      auto res = find_disjunction_heuristic(qv, tree.instance().objective, d,
                                            tree.instance().integrality, cfg, ctx, watch);
      found = res.found;
      timed_out = res.timed_out;
    }
    if (found) {
      r.compressible = true;
      r.action = RecordAction::replace;
      r.disjunction = found;
      r.time_s = watch->elapsed_s() - t0;
    } else if (timed_out && per_node_limit_s) {
      r.time_s = *per_node_limit_s;  // charged the full limit
    } else {
      r.time_s = watch->elapsed_s() - t0;
    }
  };

  if (jobs <= 1) {
    for (auto& r : out) work(r);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = cursor.fetch_add(1);
          if (i >= out.size()) return;
          work(out[i]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

namespace {

// Higher subtree/time ratio first; zero time ranks highest.
bool ratio_greater(const NodeRecord& a, const NodeRecord& b) {
  const bool a_inf = a.time_s <= 0;
  const bool b_inf = b.time_s <= 0;
  if (a_inf != b_inf) return a_inf;
  if (a_inf) return a.subtree > b.subtree;
  return static_cast<double>(a.subtree) * b.time_s > static_cast<double>(b.subtree) * a.time_s;
}

}  // namespace

std::vector<NodeId> order_nodes(const BbTree& tree, const std::vector<NodeRecord>& records,
                                const Ordering& ordering) {
  std::map<NodeId, const NodeRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.node, &r);
  for (const auto& [id, nd] : tree.nodes()) {
    if (!nd.is_leaf() && !by_id.count(id)) throw MissingRecord(id);
  }

  std::vector<NodeId> order;
  if (ordering.kind == OrderingKind::dfs) {
    for (NodeId v : tree.preorder())
      if (!tree.node(v).is_leaf()) order.push_back(v);
    return order;
  }
  for (const auto& [id, nd] : tree.nodes())
    if (!nd.is_leaf()) order.push_back(id);  // ascending creation index

  switch (ordering.kind) {
    case OrderingKind::random_shuffle: {
      std::mt19937_64 rng(ordering.seed);
      // Fisher-Yates, spelled out so the permutation is stable across
      // standard libraries.
      for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
      }
      break;
    }
    case OrderingKind::node_id: {
      std::sort(order.begin(), order.end(), [](NodeId a, NodeId b) { return a > b; });
      break;
    }
    case OrderingKind::subtree_size: {
      std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        const auto* ra = by_id.at(a);
        const auto* rb = by_id.at(b);
        if (ra->subtree != rb->subtree) return ra->subtree < rb->subtree;
        return a < b;
      });
      break;
    }
    case OrderingKind::gap: {
      const ExtValue d = tree.dual_bound();
      std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        const ExtValue ga = abs_distance(d, by_id.at(a)->bound);
        const ExtValue gb = abs_distance(d, by_id.at(b)->bound);
        if (ga != gb) return ga < gb;
        return a < b;
      });
      break;
    }
    case OrderingKind::expert: {
      std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        const auto* ra = by_id.at(a);
        const auto* rb = by_id.at(b);
        if (ra->compressible != rb->compressible) return ra->compressible;
        if (ratio_greater(*ra, *rb)) return true;
        if (ratio_greater(*rb, *ra)) return false;
        return a < b;
      });
      break;
    }
    default:
      break;
  }
  return order;
}

namespace {

// Minimal mutable tree image for the replay.
struct SimTree {
  struct N {
    NodeId parent = -1;
    NodeId left = -1, right = -1;
  };
  std::map<NodeId, N> nodes;
  NodeId next_fresh;

  explicit SimTree(const BbTree& t) : next_fresh(t.next_id()) {
    for (const auto& [id, nd] : t.nodes())
      nodes.emplace(id, N{nd.parent, nd.child_left, nd.child_right});
  }
  bool alive(NodeId v) const { return nodes.count(v) > 0; }
  long long size() const { return static_cast<long long>(nodes.size()); }
  long long subtree_size(NodeId v) const {
    long long n = 0;
    std::vector<NodeId> stack{v};
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      ++n;
      const N& nd = nodes.at(u);
      if (nd.left >= 0) {
        stack.push_back(nd.left);
        stack.push_back(nd.right);
      }
    }
    return n;
  }
  void remove_descendants(NodeId v) {
    const N nd = nodes.at(v);
    std::vector<NodeId> stack;
    if (nd.left >= 0) {
      stack.push_back(nd.left);
      stack.push_back(nd.right);
    }
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      const N un = nodes.at(u);
      if (un.left >= 0) {
        stack.push_back(un.left);
        stack.push_back(un.right);
      }
      nodes.erase(u);
    }
    nodes.at(v).left = -1;
    nodes.at(v).right = -1;
  }
  void attach_fresh_pair(NodeId v) {
    const NodeId l = next_fresh++;
    const NodeId r = next_fresh++;
    nodes.emplace(l, N{v, -1, -1});
    nodes.emplace(r, N{v, -1, -1});
    nodes.at(v).left = l;
    nodes.at(v).right = r;
  }
};

}  // namespace

Trajectory simulate(const BbTree& tree, const std::vector<NodeRecord>& records,
                    const Ordering& ordering, std::optional<double> horizon_s) {
  std::map<NodeId, const NodeRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.node, &r);
  const auto order = order_nodes(tree, records, ordering);

  Trajectory traj;
  traj.horizon_s = horizon_s;
  SimTree state(tree);
  traj.initial_size = state.size();
  double used = 0;

  for (NodeId v : order) {
    if (!state.alive(v)) continue;  // removed earlier; zero time
    const NodeRecord& rec = *by_id.at(v);
    if (horizon_s && used + rec.time_s > *horizon_s) break;  // would overrun; not applied
    used += rec.time_s;
    if (rec.compressible) {
      const long long sub = state.subtree_size(v);
      if (rec.action == RecordAction::drop) {
        state.remove_descendants(v);
      } else if (rec.action == RecordAction::replace) {
        const long long delta = -(sub - 1) + 2;
        if (delta < 0) {
          state.remove_descendants(v);
          state.attach_fresh_pair(v);
        }
      }
    }
    traj.steps.push_back(TrajectoryStep{v, rec.time_s, state.size()});
  }
  traj.final_size = state.size();
  return traj;
}

double auc_percent(const Trajectory& traj, bool terminal_segment) {
  if (!traj.horizon_s || !(*traj.horizon_s > 0)) throw ZeroHorizon();
  const double T = *traj.horizon_s;
  double num = 0;
  double prev_size = static_cast<double>(traj.initial_size);
  double used = 0;
  for (const auto& s : traj.steps) {
    num += s.time_s * prev_size;
    prev_size = static_cast<double>(s.size_after);
    used += s.time_s;
  }
  if (terminal_segment) num += (T - used) * prev_size;
  return 100.0 * num / (T * static_cast<double>(traj.initial_size));
}

double compression_ratio_percent(long long s0, long long s_final) {
  return 100.0 * (1.0 - static_cast<double>(s_final) / static_cast<double>(s0));
}

namespace {

json record_to_json(const NodeRecord& r) {
  json j;
  j["nodeId"] = r.node;
  j["compressible"] = r.compressible;
  switch (r.action) {
    case RecordAction::drop:
      j["action"] = "drop";
      break;
    case RecordAction::replace: {
      j["action"] = "replace";
      json pi = json::object();
      for (const auto& [idx, a] : r.disjunction->coeffs) pi[std::to_string(idx)] = a;
      j["pi"] = pi;
      j["pi0"] = r.disjunction->offset;
      break;
    }
    default:
      j["action"] = "none";
  }
  j["time_s"] = r.time_s;
  j["subtree"] = r.subtree;
  j["bound"] = r.bound.str();
  return j;
}

}  // namespace

std::string records_to_jsonl(const std::vector<NodeRecord>& records) {
  std::ostringstream os;
  for (const auto& r : records) os << record_to_json(r).dump() << "\n";
  return os.str();
}

std::vector<NodeRecord> records_from_jsonl(const std::string& text) {
  std::vector<NodeRecord> out;
  std::istringstream is(text);
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw SchemaError("records line " + std::to_string(line_no) + ": " + e.what());
    }
    NodeRecord r;
    r.node = j.at("nodeId").get<NodeId>();
    r.creation_index = r.node;
    r.compressible = j.at("compressible").get<bool>();
    const std::string action = j.at("action").get<std::string>();
    if (action == "drop") {
      r.action = RecordAction::drop;
    } else if (action == "replace") {
      r.action = RecordAction::replace;
      std::vector<std::pair<Index, long long>> coeffs;
      for (const auto& [key, val] : j.at("pi").items())
        coeffs.emplace_back(static_cast<Index>(std::stoll(key)), val.get<long long>());
      r.disjunction = make_disjunction(std::move(coeffs), j.at("pi0").get<long long>());
    } else {
      r.action = RecordAction::none;
    }
    r.time_s = j.at("time_s").get<double>();
    r.subtree = j.at("subtree").get<long long>();
    r.bound = ExtValue::parse(j.at("bound").get<std::string>());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace treecomp
