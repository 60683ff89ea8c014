// gcell: build and validate recursively defined server-centric topologies,
// compute routes, and run hop-length and link-load experiments.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gcell/gcell.hpp"
#include "json.hpp"

namespace {

using namespace gcell;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidSpec = 2;
constexpr int kExitRuntime = 3;

struct CliConfig {
  std::string family;
  int k = 0;
  i64 n = 0;
  bool as_json = false;
  std::string algo = "dim";
  std::string algos = "dim";
  i64 src = 0;
  i64 dst = 0;
  i64 pairs = 10000;
  i64 flows = 1000000;
  u64 seed = 0;
  std::string out;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool recursive = false;
  bool p2_interval = false;
  bool p2_zero = false;
  bool null_check_or = false;
  i64 bin_width = 1;
  i64 capacity_gib = kDefaultCapacityBytes >> 30;
};

NetworkSpec make_spec(const CliConfig& cfg) {
  NetworkSpec spec;
  if (cfg.family == "dcell") spec.family = Family::DCell;
  else if (cfg.family == "beta_dcell") spec.family = Family::BetaDCell;
  else if (cfg.family == "ficonn") spec.family = Family::FiConn;
  else throw InvalidSpec("unknown family '" + cfg.family + "'");
  spec.k = cfg.k;
  spec.n = cfg.n;
  spec.validate();
  return spec;
}

PrOptions proxy_options(const CliConfig& cfg) {
  PrOptions o;
  o.p2_interval = cfg.p2_interval;
  o.p2_zero = cfg.p2_zero;
  o.null_check_or = cfg.null_check_or;
  o.recursive_subpaths = cfg.recursive;
  return o;
}

// Data goes to stdout unless --out names a file; progress goes to stderr.
class DataSink {
 public:
  explicit DataSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("error writing output");
  }

 private:
  std::ofstream file_;
};

std::vector<Algo> parse_algos(const std::string& list) {
  std::vector<Algo> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = algo_from_name(item);
    if (!a) throw PreconditionViolated("unknown algorithm '" + item + "'");
    out.push_back(*a);
  }
  if (out.empty()) throw PreconditionViolated("empty algorithm list");
  return out;
}

int cmd_stats(const CliConfig& cfg) {
  NetworkSpec spec = make_spec(cfg);
  StatsRecord st = stats(spec);
  DataSink sink(cfg.out);
  if (cfg.as_json) {
    json j = {{"family", family_name(spec.family)},
              {"k", spec.k},
              {"n", spec.n},
              {"servers", st.servers},
              {"switches", st.switches},
              {"links", st.physical_links},
              {"dim_route_bound", st.dim_route_bound},
              {"g", st.g},
              {"t", st.t}};
    sink.stream() << j.dump(2) << '\n';
  } else {
    auto& os = sink.stream();
    os << "spec: " << spec.name() << '\n'
       << "servers: " << st.servers << '\n'
       << "switches: " << st.switches << '\n'
       << "links: " << st.physical_links << '\n'
       << "dim_route_bound: " << st.dim_route_bound << '\n';
    os << "g:";
    for (i64 g : st.g) os << ' ' << g;
    os << "\nt:";
    for (i64 t : st.t) os << ' ' << t;
    os << '\n';
  }
  sink.finish();
  return kExitOk;
}

int cmd_validate(const CliConfig& cfg) {
  NetworkSpec spec = make_spec(cfg);
  auto start = std::chrono::steady_clock::now();
  Topology topo = build_graph(spec, cfg.capacity_gib << 30);
  ValidationReport report = validate(topo);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  std::cerr << "built and validated " << spec.name() << " in " << elapsed.count()
            << " s\n";
  DataSink sink(cfg.out);
  auto& os = sink.stream();
  if (report.ok()) {
    os << spec.name() << ": ok\n";
    sink.finish();
    return kExitOk;
  }
  os << spec.name() << ": " << report.issues.size() << " issue(s)\n";
  for (const auto& issue : report.issues) os << "  " << issue << '\n';
  sink.finish();
  return kExitRuntime;
}

int cmd_route(const CliConfig& cfg) {
  NetworkSpec spec = make_spec(cfg);
  LevelSizes sizes = compute_sizes(spec);
  auto a = algo_from_name(cfg.algo);
  if (!a) throw PreconditionViolated("unknown algorithm '" + cfg.algo + "'");
  Route route;
  if (*a == Algo::Dim) {
    route = dim_route(spec, sizes, cfg.src, cfg.dst);
  } else if (*a == Algo::Bfs) {
    Topology topo = build_graph(spec, cfg.capacity_gib << 30);
    route = bfs_route(topo, cfg.src, cfg.dst);
  } else {
    PrOptions opts = proxy_options(cfg);
    opts.variant = (*a == Algo::GpE)   ? GpVariant::Exhaustive
                   : (*a == Algo::GpI) ? GpVariant::Interval
                                       : GpVariant::Zero;
    route = pr_route(spec, sizes, cfg.src, cfg.dst, opts);
  }
  int m = (cfg.src == cfg.dst) ? 1 : std::max(1, decision_level(sizes, cfg.src, cfg.dst));
  DataSink sink(cfg.out);
  auto& os = sink.stream();
  for (size_t i = 0; i < route.hops.size(); ++i)
    os << (i ? " " : "") << route.hops[i];
  os << '\n' << "len=" << route.length() << " order=" << route_order(spec, sizes, route, m)
     << '\n';
  sink.finish();
  return kExitOk;
}

int cmd_bench(const CliConfig& cfg) {
  NetworkSpec spec = make_spec(cfg);
  std::vector<Algo> algos = parse_algos(cfg.algos);
  LevelSizes sizes = compute_sizes(spec);
  auto pairs = sample_pairs(sizes, cfg.pairs, cfg.seed);

  std::optional<Topology> topo;
  bool wants_bfs = false;
  for (Algo a : algos) wants_bfs = wants_bfs || a == Algo::Bfs;
  if (wants_bfs) {
    i64 budget = cfg.capacity_gib << 30;
    if (estimate_graph_bytes(spec, sizes) <= budget) {
      auto start = std::chrono::steady_clock::now();
      topo.emplace(build_graph(spec, budget));
      auto el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
      std::cerr << "built " << spec.name() << " in " << el.count() << " s\n";
    } else {
      std::cerr << spec.name() << " exceeds the capacity budget; bfs rows skipped\n";
    }
  }

  BenchSettings settings;
  settings.threads = cfg.threads;
  settings.proxy = proxy_options(cfg);
  DimLenCache cache;
  settings.proxy.cache = &cache;

  auto start = std::chrono::steady_clock::now();
  auto records = run_bench(spec, algos, pairs, cfg.seed,
                           topo ? &*topo : nullptr, settings);
  auto el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  std::cerr << "evaluated " << cfg.pairs << " pairs in " << el.count() << " s\n";

  DataSink sink(cfg.out);
  export_bench_csv(records, sink.stream());
  sink.finish();
  return kExitOk;
}

int cmd_loadsim(const CliConfig& cfg) {
  NetworkSpec spec = make_spec(cfg);
  auto a = algo_from_name(cfg.algo);
  if (!a) throw PreconditionViolated("unknown algorithm '" + cfg.algo + "'");
  Topology topo = build_graph(spec, cfg.capacity_gib << 30);
  BenchSettings settings;
  settings.threads = cfg.threads;
  settings.proxy = proxy_options(cfg);
  DimLenCache cache;
  settings.proxy.cache = &cache;
  auto start = std::chrono::steady_clock::now();
  LoadHistogram hist = run_loadsim(topo, *a, cfg.flows, cfg.seed, settings);
  auto el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  std::cerr << "routed " << cfg.flows << " flows in " << el.count()
            << " s; max_load=" << hist.max_load << " total_load=" << hist.total_load
            << '\n';
  DataSink sink(cfg.out);
  export_hist_csv(hist, sink.stream(), cfg.bin_width);
  sink.finish();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"server-centric topology construction, routing, and experiments"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_spec_flags = [&](CLI::App* cmd) {
    cmd->add_option("--family", cfg.family, "dcell, beta_dcell, or ficonn")->required();
    cmd->add_option("--k", cfg.k, "recursion depth")->required();
    cmd->add_option("--n", cfg.n, "servers per switch")->required();
  };
  auto add_proxy_flags = [&](CLI::App* cmd) {
    cmd->add_flag("--recursive", cfg.recursive, "use proxy routing in subpaths too");
    cmd->add_flag("--p2-interval", cfg.p2_interval,
                  "enable the middle-subpath property for gp_i");
    cmd->add_flag("--p2-zero", cfg.p2_zero,
                  "enable the middle-subpath property for gp_0");
    cmd->add_flag("--null-check-or", cfg.null_check_or,
                  "declare a null result when either endpoint is near its crossing");
  };
  auto add_capacity = [&](CLI::App* cmd) {
    cmd->add_option("--capacity-gib", cfg.capacity_gib,
                    "memory budget for graph construction (GiB)");
  };

  CLI::App* stats_cmd = app.add_subcommand("stats", "print analytic topology properties");
  add_spec_flags(stats_cmd);
  stats_cmd->add_flag("--json", cfg.as_json, "emit JSON instead of text");
  stats_cmd->add_option("--out", cfg.out, "write data to a file instead of stdout");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "build the graph and check structural invariants");
  add_spec_flags(validate_cmd);
  add_capacity(validate_cmd);
  validate_cmd->add_option("--out", cfg.out, "write data to a file instead of stdout");

  CLI::App* route_cmd = app.add_subcommand("route", "compute one route between two servers");
  add_spec_flags(route_cmd);
  route_cmd->add_option("--src", cfg.src, "source server uid")->required();
  route_cmd->add_option("--dst", cfg.dst, "destination server uid")->required();
  route_cmd->add_option("--algo", cfg.algo, "dim, bfs, gp_e, gp_i, or gp_0");
  add_proxy_flags(route_cmd);
  add_capacity(route_cmd);
  route_cmd->add_option("--out", cfg.out, "write data to a file instead of stdout");

  CLI::App* bench_cmd =
      app.add_subcommand("bench", "hop-length statistics over sampled pairs");
  add_spec_flags(bench_cmd);
  bench_cmd->add_option("--algos", cfg.algos, "comma-separated algorithm list");
  bench_cmd->add_option("--pairs", cfg.pairs, "number of sampled pairs");
  bench_cmd->add_option("--seed", cfg.seed, "RNG seed")->required();
  bench_cmd->add_option("--threads", cfg.threads, "worker count");
  add_proxy_flags(bench_cmd);
  add_capacity(bench_cmd);
  bench_cmd->add_option("--out", cfg.out, "write data to a file instead of stdout");

  CLI::App* load_cmd =
      app.add_subcommand("loadsim", "per-link load histogram over sampled flows");
  add_spec_flags(load_cmd);
  load_cmd->add_option("--algo", cfg.algo, "dim, gp_e, gp_i, or gp_0");
  load_cmd->add_option("--flows", cfg.flows, "number of sampled flows");
  load_cmd->add_option("--seed", cfg.seed, "RNG seed")->required();
  load_cmd->add_option("--threads", cfg.threads, "worker count");
  load_cmd->add_option("--bin-width", cfg.bin_width, "histogram bin width");
  add_proxy_flags(load_cmd);
  add_capacity(load_cmd);
  load_cmd->add_option("--out", cfg.out, "write data to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (stats_cmd->parsed()) return cmd_stats(cfg);
    if (validate_cmd->parsed()) return cmd_validate(cfg);
    if (route_cmd->parsed()) return cmd_route(cfg);
    if (bench_cmd->parsed()) return cmd_bench(cfg);
    if (load_cmd->parsed()) return cmd_loadsim(cfg);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const InvalidSpec& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return kExitInvalidSpec;
  } catch (const NonIntegralFiConn& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return kExitInvalidSpec;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
