// treecomp: generate BB trees, compress them post hoc (exact MIP search or
// coefficient-walk heuristic), precompute per-node compressibility records,
// simulate node orderings under time budgets, and aggregate CSV reports.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "treecomp/branching.hpp"
#include "treecomp/compress.hpp"
#include "treecomp/fixtures.hpp"
#include "treecomp/json_util.hpp"
#include "treecomp/mip.hpp"
#include "treecomp/records.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace treecomp;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliError : std::runtime_error {
  int exit_code;
  CliError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(2, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(2, "cannot write '" + path + "'");
  out << content;
}

std::shared_ptr<const Instance> load_instance(const std::string& path,
                                              std::vector<std::string>* warnings = nullptr) {
  const std::string text = read_file(path);
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".mps" || ext == ".MPS") {
    auto out = parse_mps(text);
    if (warnings) *warnings = out.warnings;
    return std::make_shared<const Instance>(std::move(out.instance));
  }
  return std::make_shared<const Instance>(parse_json_instance(text));
}

struct ClockOptions {
  bool virtual_clock = false;
  double seconds_per_lp = 1e-3;
};

LpContext make_context(const std::string& backend) {
  LpContext ctx;
  ctx.backend = backend == "float" ? Backend::floating : Backend::exact;
  ctx.counter = std::make_shared<LpCounter>();
  return ctx;
}

void write_manifest(const std::string& out_path, const std::string& command, const json& config,
                    const std::string& instance_path, const std::string& instance_hash_hex,
                    std::uint64_t seed, double wall_s, const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["config"] = config;
  m["instance"] = instance_path;
  m["instance_hash"] = instance_hash_hex;
  m["seed"] = seed;
  m["wall_time_s"] = wall_s;
  m["outputs"] = outputs;
  m["version"] = kVersion;
  write_file(out_path, m.dump(2) + "\n");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- generate
struct GenerateArgs {
  std::string instance_path, out_path;
  std::string rule = "fsb";
  bool plunge = false;
  long long node_limit = 10'000;
  std::string incumbent = "auto";
  std::string backend = "exact";
  std::uint64_t seed = 0;
  int reliability = 10;
};

int cmd_generate(const GenerateArgs& a) {
  auto ctx = make_context(a.backend);
  Stopwatch wall(ctx, false);
  std::vector<std::string> warnings;
  auto inst = load_instance(a.instance_path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  Instance work = *inst;
  if (a.incumbent == "auto") {
    if (!work.known_optimal) {
      MipParams params;
      params.node_limit = 200'000;
      auto mres = mip_solve(MipProblem{work.system, work.objective, work.integrality}, params,
                            ctx.with_backend(Backend::exact));
      if (mres.status == MipStatus::optimal)
        work.known_optimal = ExtValue::of(*mres.best_value);
      else if (mres.status == MipStatus::infeasible)
        work.known_optimal = ExtValue::pos_inf();
      else
        std::cerr << "warning: incumbent solve hit a limit; generating without incumbent\n";
    }
  } else if (a.incumbent == "none") {
    work.known_optimal.reset();
  } else {
    work.known_optimal = ExtValue::parse(a.incumbent);
  }
  auto shared = std::make_shared<const Instance>(std::move(work));

  BranchingConfig cfg;
  cfg.rule = a.rule == "rb" ? BranchRule::rb : BranchRule::fsb;
  cfg.plunging = a.plunge;
  cfg.node_limit = a.node_limit;
  cfg.reliability_threshold = a.reliability;
  auto res = generate_tree(shared, cfg, a.seed, ctx);

  write_file(a.out_path, res.tree.serialize());
  const std::string log_path = a.out_path + ".genlog.json";
  write_file(log_path, res.log.to_json() + "\n");
  json config{{"rule", a.rule},      {"plunge", a.plunge},           {"node_limit", a.node_limit},
              {"incumbent", a.incumbent}, {"backend", a.backend},    {"reliability", a.reliability}};
  write_manifest(a.out_path + ".manifest.json", "generate", config, a.instance_path,
                 instance_hash(*shared), a.seed, wall.elapsed_s(), {a.out_path, log_path});

  const ExtValue d = res.tree.dual_bound();
  std::cout << "tree " << a.out_path << " size=" << res.tree.size() << " dual_bound=" << d.str()
            << " sb_lp_solves=" << res.log.sb_lp_solves
            << (res.log.hit_node_limit ? " (node limit reached)" : "") << "\n";
  return 0;
}

// ---------------------------------------------------------------- compress
struct CompressArgs {
  std::string tree_path, instance_path, out_path;
  std::string method = "exact";
  std::string supp = "inf";
  long long coeff_bound = 100;
  std::optional<double> time_limit_s;
  std::optional<double> node_time_limit_s;
  std::string order = "dfs";
  std::uint64_t seed = 0;
  std::string backend = "exact";
  ClockOptions clock;
};

int cmd_compress(const CompressArgs& a) {
  auto ctx = make_context(a.backend);
  Stopwatch wall(ctx, false);
  Stopwatch watch(ctx, a.clock.virtual_clock, a.clock.seconds_per_lp);
  auto inst = load_instance(a.instance_path);
  BbTree tree = BbTree::deserialize(read_file(a.tree_path), inst);

  CompressMode mode;
  if (a.method == "heuristic")
    mode.method = CompressMethod::heuristic;
  else if (a.method == "drop")
    mode.method = CompressMethod::drop_only;
  else
    mode.method = CompressMethod::exact;
  if (a.supp != "inf") mode.support_limit = std::stoi(a.supp);
  mode.coefficient_bound = a.coeff_bound;
  mode.global_limit_s = a.time_limit_s;
  mode.per_node_limit_s = a.node_time_limit_s;

  OrderingHook hook;
  if (a.order != "dfs") {
    const Ordering ord = parse_ordering(a.order, a.seed);
    if (ord.kind == OrderingKind::expert)
      throw CliError(2, "the expert ordering needs precomputed records; use simulate");
    hook = [ord](const BbTree& t) { return order_nodes(t, skeleton_records(t), ord); };
  }

  auto [compressed, log] = compress_tree(tree, mode, ctx, &watch, hook);

  const std::string out = a.out_path.empty() ? a.tree_path + ".compressed.jsonl" : a.out_path;
  write_file(out, compressed.serialize());
  const std::string log_path = out + ".log.jsonl";
  write_file(log_path, log.to_jsonl());
  json config{{"method", a.method}, {"supp", a.supp},
              {"M", a.coeff_bound}, {"time_limit_s", a.time_limit_s ? json(*a.time_limit_s) : json()},
              {"node_time_limit_s", a.node_time_limit_s ? json(*a.node_time_limit_s) : json()},
              {"order", a.order},   {"virtual_clock", a.clock.virtual_clock}};
  write_manifest(out + ".manifest.json", "compress", config, a.instance_path,
                 instance_hash(*inst), a.seed, wall.elapsed_s(), {out, log_path});

  std::cout << "compressed " << out << " size " << log.initial_size << " -> " << log.final_size
            << " ratio=" << fmt_double(compression_ratio_percent(log.initial_size, log.final_size))
            << "% bound " << log.initial_bound.str() << " -> " << log.final_bound.str()
            << (log.hit_global_limit ? " (time limit reached)" : "") << "\n";
  return log.hit_global_limit ? 1 : 0;
}

// --------------------------------------------------------------- precompute
struct PrecomputeArgs {
  std::string tree_path, instance_path, out_path;
  std::string finder = "heuristic";
  double node_limit_seconds = 1200;
  std::string supp = "inf";
  long long coeff_bound = 100;
  int jobs = 1;
  std::string backend = "exact";
  ClockOptions clock;
  std::uint64_t seed = 0;
};

int cmd_precompute(const PrecomputeArgs& a) {
  auto ctx = make_context(a.backend);
  Stopwatch wall(ctx, false);
  Stopwatch watch(ctx, a.clock.virtual_clock, a.clock.seconds_per_lp);
  auto inst = load_instance(a.instance_path);
  BbTree tree = BbTree::deserialize(read_file(a.tree_path), inst);

  FinderChoice finder;
  finder.method = a.finder == "exact" ? CompressMethod::exact : CompressMethod::heuristic;
  if (a.supp != "inf") finder.mode.support_limit = std::stoi(a.supp);
  finder.mode.coefficient_bound = a.coeff_bound;

  auto records = precompute_records(tree, finder, a.node_limit_seconds, ctx, &watch, a.jobs);
  write_file(a.out_path, records_to_jsonl(records));
  json config{{"finder", a.finder},
              {"node_limit_seconds", a.node_limit_seconds},
              {"supp", a.supp},
              {"M", a.coeff_bound},
              {"jobs", a.jobs},
              {"virtual_clock", a.clock.virtual_clock}};
  write_manifest(a.out_path + ".manifest.json", "precompute", config, a.instance_path,
                 instance_hash(*inst), a.seed, wall.elapsed_s(), {a.out_path});
  long long compressible = 0;
  for (const auto& r : records)
    if (r.compressible) ++compressible;
  std::cout << "records " << a.out_path << " nodes=" << records.size()
            << " compressible=" << compressible << "\n";
  return 0;
}

// ----------------------------------------------------------------- simulate
struct SimulateArgs {
  std::string tree_path, instance_path, records_path, out_path;
  std::string strategy = "expert";
  std::string horizon = "inf";
  std::uint64_t seed = 0;
  bool terminal_segment = false;
  bool append = false;
};

int cmd_simulate(const SimulateArgs& a) {
  LpContext ctx = make_context("exact");
  Stopwatch wall(ctx, false);
  auto inst = load_instance(a.instance_path);
  BbTree tree = BbTree::deserialize(read_file(a.tree_path), inst);
  auto records = records_from_jsonl(read_file(a.records_path));

  std::optional<double> horizon;
  if (a.horizon != "inf") horizon = std::stod(a.horizon);

  std::vector<std::string> strategies;
  if (a.strategy == "all") {
    strategies = {"random", "dfs", "nodeid", "subtree", "gap", "expert"};
  } else {
    strategies = {a.strategy};
  }

  std::ostringstream csv;
  if (!a.append) csv << "instance,strategy,T,auc_pct,ratio_pct,nodes_processed\n";
  for (const auto& name : strategies) {
    const Ordering ord = parse_ordering(name, a.seed);
    auto traj = simulate(tree, records, ord, horizon);
    std::string auc_cell;
    if (horizon && *horizon > 0) auc_cell = fmt_double(auc_percent(traj, a.terminal_segment));
    csv << inst->name << "," << name << "," << (horizon ? fmt_double(*horizon) : "inf") << ","
        << auc_cell << "," << fmt_double(compression_ratio_percent(traj.initial_size, traj.final_size))
        << "," << traj.steps.size() << "\n";
  }
  if (a.append && fs::exists(a.out_path)) {
    std::ofstream out(a.out_path, std::ios::app);
    out << csv.str();
  } else {
    write_file(a.out_path, csv.str());
  }
  json config{{"strategy", a.strategy},
              {"horizon", a.horizon},
              {"terminal_segment", a.terminal_segment},
              {"records", a.records_path}};
  write_manifest(a.out_path + ".manifest.json", "simulate", config, a.instance_path,
                 instance_hash(*inst), a.seed, wall.elapsed_s(), {a.out_path});
  std::cout << "trajectories " << a.out_path << " strategies=" << strategies.size() << "\n";
  return 0;
}

// ------------------------------------------------------------------- report
struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out_path;
  double auc_horizon = 3600;
};

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> files;
  for (const auto& pat : patterns) {
    if (pat.find('*') == std::string::npos) {
      if (fs::exists(pat)) files.push_back(pat);
      continue;
    }
    const fs::path p(pat);
    const fs::path dir = p.parent_path().empty() ? "." : p.parent_path();
    const std::string stem = p.filename().string();
    const auto star = stem.find('*');
    const std::string prefix = stem.substr(0, star);
    const std::string suffix = stem.substr(star + 1);
    if (!fs::is_directory(dir)) continue;
    std::vector<std::string> found;
    for (const auto& e : fs::directory_iterator(dir)) {
      const std::string name = e.path().filename().string();
      if (name.size() < prefix.size() + suffix.size()) continue;
      if (name.rfind(prefix, 0) != 0) continue;
      if (name.substr(name.size() - suffix.size()) != suffix) continue;
      found.push_back(e.path().string());
    }
    std::sort(found.begin(), found.end());
    files.insert(files.end(), found.begin(), found.end());
  }
  return files;
}

int cmd_report(const ReportArgs& a) {
  auto files = expand_globs(a.inputs);
  if (files.empty()) throw CliError(2, "no input trajectory files matched");

  struct Row {
    std::string strategy;
    std::optional<double> horizon;  // nullopt = inf
    std::optional<double> auc;
    double ratio = 0;
  };
  std::vector<Row> rows;
  for (const auto& f : files) {
    std::istringstream is(read_file(f));
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line.rfind("instance,", 0) == 0) continue;
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (cells.size() < 6) continue;
      Row r;
      r.strategy = cells[1];
      if (cells[2] != "inf") r.horizon = std::stod(cells[2]);
      if (!cells[3].empty()) r.auc = std::stod(cells[3]);
      r.ratio = std::stod(cells[4]);
      rows.push_back(std::move(r));
    }
  }
  if (rows.empty()) throw CliError(2, "trajectory files contained no data rows");

  auto near = [](double x, double y) { return std::abs(x - y) <= 1e-6 * std::max(1.0, std::abs(y)); };
  const std::vector<std::string> strategies{"random", "dfs", "nodeid", "subtree", "gap", "expert"};
  std::ostringstream csv;
  csv << "strategy,auc_pct_mean,ratio_15min,ratio_1h,ratio_4h\n";
  for (const auto& s : strategies) {
    double auc_sum = 0;
    int auc_n = 0;
    double ratio_sum[3] = {0, 0, 0};
    int ratio_n[3] = {0, 0, 0};
    const double horizons[3] = {900, 3600, 14400};
    bool any = false;
    for (const auto& r : rows) {
      if (r.strategy != s) continue;
      any = true;
      if (r.auc && r.horizon && near(*r.horizon, a.auc_horizon)) {
        auc_sum += *r.auc;
        ++auc_n;
      }
      for (int h = 0; h < 3; ++h) {
        if (r.horizon && near(*r.horizon, horizons[h])) {
          ratio_sum[h] += r.ratio;
          ++ratio_n[h];
        }
      }
    }
    if (!any) continue;
    csv << s << "," << (auc_n ? fmt_double(auc_sum / auc_n) : "") << ","
        << (ratio_n[0] ? fmt_double(ratio_sum[0] / ratio_n[0]) : "") << ","
        << (ratio_n[1] ? fmt_double(ratio_sum[1] / ratio_n[1]) : "") << ","
        << (ratio_n[2] ? fmt_double(ratio_sum[2] / ratio_n[2]) : "") << "\n";
  }
  write_file(a.out_path, csv.str());
  std::cout << "report " << a.out_path << " from " << files.size() << " file(s)\n";
  return 0;
}

// ----------------------------------------------------------------- fixtures
int cmd_fixtures(const std::string& out_dir) {
  LpContext ctx;
  fs::create_directories(out_dir);
  auto dump = [&](const fixtures::Fixture& fx, const std::string& stem) {
    write_file((fs::path(out_dir) / (stem + ".json")).string(),
               write_json_instance(*fx.instance));
    write_file((fs::path(out_dir) / (stem + ".tree.jsonl")).string(), fx.tree.serialize());
  };
  dump(fixtures::box_fifth(ctx), "box-fifth");
  dump(fixtures::box_half(ctx), "box-half");
  dump(fixtures::triangle(ctx), "triangle");
  std::cout << "fixtures written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"branch-and-bound tree compression toolkit"};
  app.set_config("--config", "", "TOML/INI config file with long-option defaults")
      ->envname("TREECOMP_CONFIG");
  app.require_subcommand(1);

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "generate a BB tree for an instance");
  gen->add_option("--instance", g.instance_path, "instance file (.mps or .json)")->required();
  gen->add_option("--rule", g.rule, "branching rule")->check(CLI::IsMember({"fsb", "rb"}));
  gen->add_flag("--plunge", g.plunge, "dive into children of the last branched node");
  gen->add_option("--node-limit", g.node_limit, "stop before exceeding this many nodes");
  gen->add_option("--incumbent", g.incumbent, "pruning bound: a value, 'auto' or 'none'");
  gen->add_option("--backend", g.backend, "LP backend")->check(CLI::IsMember({"exact", "float"}));
  gen->add_option("--seed", g.seed, "seed recorded in log and manifest");
  gen->add_option("--reliability", g.reliability, "pseudocost reliability threshold (rb)");
  gen->add_option("--out", g.out_path, "tree output path (.jsonl)")->required();

  CompressArgs c;
  auto* cx = app.add_subcommand("compress", "compress a tree file");
  cx->add_option("--tree", c.tree_path, "tree file")->required();
  cx->add_option("--instance", c.instance_path, "matching instance file")->required();
  cx->add_option("--method", c.method, "exact | heuristic | drop")
      ->check(CLI::IsMember({"exact", "heuristic", "drop"}));
  cx->add_option("--supp", c.supp, "support size limit: 1, 2, ... or 'inf'");
  cx->add_option("--M", c.coeff_bound, "coefficient magnitude bound");
  cx->add_option("--time-limit", c.time_limit_s, "global limit in seconds");
  cx->add_option("--node-time-limit", c.node_time_limit_s, "per-node limit in seconds");
  cx->add_option("--order", c.order, "traversal: dfs | id | subtree | gap | random");
  cx->add_option("--seed", c.seed, "seed for --order random");
  cx->add_option("--backend", c.backend, "LP backend for exploration")
      ->check(CLI::IsMember({"exact", "float"}));
  cx->add_flag("--virtual-clock", c.clock.virtual_clock,
               "deterministic clock: time advances per LP solve");
  cx->add_option("--virtual-quantum", c.clock.seconds_per_lp, "virtual seconds per LP solve");
  cx->add_option("--out", c.out_path, "compressed tree output path");

  PrecomputeArgs p;
  auto* pc = app.add_subcommand("precompute", "per-node compressibility records");
  pc->add_option("--tree", p.tree_path)->required();
  pc->add_option("--instance", p.instance_path)->required();
  pc->add_option("--finder", p.finder, "heuristic | exact")
      ->check(CLI::IsMember({"heuristic", "exact"}));
  pc->add_option("--node-limit-seconds", p.node_limit_seconds, "per-node time budget");
  pc->add_option("--supp", p.supp, "support limit for the exact finder");
  pc->add_option("--M", p.coeff_bound, "coefficient magnitude bound");
  pc->add_option("--jobs", p.jobs, "worker threads across nodes");
  pc->add_option("--backend", p.backend)->check(CLI::IsMember({"exact", "float"}));
  pc->add_flag("--virtual-clock", p.clock.virtual_clock);
  pc->add_option("--virtual-quantum", p.clock.seconds_per_lp);
  pc->add_option("--out", p.out_path, "records output path (.jsonl)")->required();

  SimulateArgs s;
  auto* sim = app.add_subcommand("simulate", "replay compression under an ordering");
  sim->add_option("--tree", s.tree_path)->required();
  sim->add_option("--instance", s.instance_path)->required();
  sim->add_option("--records", s.records_path)->required();
  sim->add_option("--strategy", s.strategy,
                  "random | dfs | nodeid | subtree | gap | expert | all");
  sim->add_option("--horizon", s.horizon, "seconds, or 'inf'");
  sim->add_option("--seed", s.seed, "seed for the random strategy");
  sim->add_flag("--terminal-segment", s.terminal_segment,
                "charge the idle tail of the horizon into the AUC");
  sim->add_flag("--append", s.append, "append rows to an existing CSV");
  sim->add_option("--out", s.out_path, "trajectory CSV")->required();

  ReportArgs r;
  auto* rep = app.add_subcommand("report", "aggregate trajectory CSVs");
  rep->add_option("inputs", r.inputs, "trajectory CSV files or globs")->required();
  rep->add_option("--auc-horizon", r.auc_horizon, "horizon whose AUC is averaged");
  rep->add_option("--out", r.out_path, "summary CSV")->required();

  std::string fixtures_dir = "fixtures";
  auto* fx = app.add_subcommand("fixtures", "export the built-in worked examples");
  fx->add_option("--out-dir", fixtures_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(g);
    if (cx->parsed()) return cmd_compress(c);
    if (pc->parsed()) return cmd_precompute(p);
    if (sim->parsed()) return cmd_simulate(s);
    if (rep->parsed()) return cmd_report(r);
    if (fx->parsed()) return cmd_fixtures(fixtures_dir);
  } catch (const CliError& e) {
    std::cerr << json{{"error", {{"type", "cli"}, {"message", e.what()}}}}.dump() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "runtime"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  }
  return 2;
}
