#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "gcell/proxy.hpp"
#include "gcell/routing.hpp"
#include "gcell/topology.hpp"

namespace gcell {

// SplitMix64: the documented deterministic generator behind all sampling.
// Identical seeds give identical streams on every platform.
struct SplitMix64 {
  u64 state;

  explicit SplitMix64(u64 seed) : state(seed) {}

  u64 next() {
    u64 z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, bound) by rejection.
  u64 below(u64 bound) {
    u64 threshold = (0 - bound) % bound;
    for (;;) {
      u64 r = next();
      if (r >= threshold) return r % bound;
    }
  }
};

// Uniform ordered pairs with src != dst over [0, t_k).
inline std::vector<std::pair<i64, i64>> sample_pairs(const LevelSizes& sizes, i64 count,
                                                     u64 seed) {
  if (count < 0) throw InvalidCount("pair count must be non-negative");
  u64 n = static_cast<u64>(sizes.servers());
  SplitMix64 rng(seed);
  std::vector<std::pair<i64, i64>> pairs;
  pairs.reserve(static_cast<size_t>(count));
  while (static_cast<i64>(pairs.size()) < count) {
    i64 src = static_cast<i64>(rng.below(n));
    i64 dst = static_cast<i64>(rng.below(n));
    if (src != dst) pairs.emplace_back(src, dst);
  }
  return pairs;
}

// Runs fn(begin, end) over [0, total) split into contiguous chunks, one per
// worker.  Results must be keyed by index so the outcome is schedule-free.
template <typename Fn>
inline void parallel_for(i64 total, int threads, Fn&& fn) {
  if (threads <= 1 || total < 2) {
    fn(i64{0}, total);
    return;
  }
  int workers = static_cast<int>(std::min<i64>(threads, total));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  i64 chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    i64 begin = w * chunk;
    i64 end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

enum class Algo { Dim, Bfs, GpE, GpI, Gp0 };

inline const char* algo_name(Algo a) {
  switch (a) {
    case Algo::Dim: return "dim";
    case Algo::Bfs: return "bfs";
    case Algo::GpE: return "gp_e";
    case Algo::GpI: return "gp_i";
    case Algo::Gp0: return "gp_0";
  }
  return "?";
}

inline std::optional<Algo> algo_from_name(const std::string& name) {
  for (Algo a : {Algo::Dim, Algo::Bfs, Algo::GpE, Algo::GpI, Algo::Gp0})
    if (name == algo_name(a)) return a;
  return std::nullopt;
}

struct BenchRecord {
  NetworkSpec spec;
  Algo algo = Algo::Dim;
  i64 pairs = 0;
  u64 seed = 0;
  bool skipped = false;  // BFS over the capacity budget
  double mean_len = 0;
  double sem = 0;
  double savings_pct = 0;
  std::optional<double> mean_candidates;   // proxy variants only
  std::optional<double> mean_good_routes;  // proxy variants only
  double success_rate_pct = 0;             // strictly shorter than dimensional
  i64 max_len = 0;
};

struct BenchSettings {
  int threads = 1;
  PrOptions proxy;  // variant is overridden per algorithm
};

namespace detail {

struct PairOutcome {
  i64 len = 0;
  i64 candidates = 0;
  i64 good = 0;
};

inline PrOptions options_for(Algo algo, const PrOptions& base) {
  PrOptions o = base;
  switch (algo) {
    case Algo::GpE: o.variant = GpVariant::Exhaustive; break;
    case Algo::GpI: o.variant = GpVariant::Interval; break;
    case Algo::Gp0: o.variant = GpVariant::Zero; break;
    default: break;
  }
  return o;
}

}  // namespace detail

// Evaluates each algorithm over one shared pair list.  BFS needs a
// materialized topology; pass null to record it as skipped.
inline std::vector<BenchRecord> run_bench(const NetworkSpec& spec,
                                          const std::vector<Algo>& algorithms,
                                          const std::vector<std::pair<i64, i64>>& pairs,
                                          u64 seed, const Topology* topo = nullptr,
                                          const BenchSettings& settings = {}) {
  LevelSizes sizes = compute_sizes(spec);
  i64 count = static_cast<i64>(pairs.size());

  std::vector<i64> dim_lens(static_cast<size_t>(count));
  parallel_for(count, settings.threads, [&](i64 begin, i64 end) {
    for (i64 i = begin; i < end; ++i)
      dim_lens[static_cast<size_t>(i)] =
          dim_len(spec, sizes, pairs[static_cast<size_t>(i)].first,
                  pairs[static_cast<size_t>(i)].second);
  });
  double dim_mean = 0;
  for (i64 len : dim_lens) dim_mean += static_cast<double>(len);
  if (count > 0) dim_mean /= static_cast<double>(count);

  std::vector<BenchRecord> records;
  for (Algo algo : algorithms) {
    BenchRecord rec;
    rec.spec = spec;
    rec.algo = algo;
    rec.pairs = count;
    rec.seed = seed;
    if (algo == Algo::Bfs && topo == nullptr) {
      rec.skipped = true;
      records.push_back(rec);
      continue;
    }
    std::vector<detail::PairOutcome> out(static_cast<size_t>(count));
    bool proxy_algo = algo == Algo::GpE || algo == Algo::GpI || algo == Algo::Gp0;
    parallel_for(count, settings.threads, [&](i64 begin, i64 end) {
      std::optional<BfsRunner> bfs;
      if (algo == Algo::Bfs) bfs.emplace(*topo);
      PrOptions opts = detail::options_for(algo, settings.proxy);
      for (i64 i = begin; i < end; ++i) {
        auto [src, dst] = pairs[static_cast<size_t>(i)];
        auto& o = out[static_cast<size_t>(i)];
        switch (algo) {
          case Algo::Dim:
            o.len = dim_lens[static_cast<size_t>(i)];
            break;
          case Algo::Bfs:
            o.len = bfs->route(src, dst).length();
            break;
          default: {
            PrResult r = pr_route_ex(spec, sizes, src, dst, opts);
            o.len = r.route.length();
            o.candidates = r.candidates_examined;
            o.good = r.good_route_count;
            break;
          }
        }
      }
    });
    double mean = 0;
    for (const auto& o : out) mean += static_cast<double>(o.len);
    if (count > 0) mean /= static_cast<double>(count);
    double var = 0;
    i64 successes = 0;
    double cand_sum = 0, good_sum = 0;
    for (i64 i = 0; i < count; ++i) {
      const auto& o = out[static_cast<size_t>(i)];
      double d = static_cast<double>(o.len) - mean;
      var += d * d;
      if (o.len < dim_lens[static_cast<size_t>(i)]) ++successes;
      cand_sum += static_cast<double>(o.candidates);
      good_sum += static_cast<double>(o.good);
      rec.max_len = std::max(rec.max_len, o.len);
    }
    rec.mean_len = mean;
    if (count > 1) {
      double sd = std::sqrt(var / static_cast<double>(count - 1));
      rec.sem = sd / std::sqrt(static_cast<double>(count));
    }
    rec.savings_pct = dim_mean > 0 ? 100.0 * (dim_mean - mean) / dim_mean : 0.0;
    rec.success_rate_pct =
        count > 0 ? 100.0 * static_cast<double>(successes) / static_cast<double>(count)
                  : 0.0;
    if (proxy_algo && count > 0) {
      rec.mean_candidates = cand_sum / static_cast<double>(count);
      rec.mean_good_routes = good_sum / static_cast<double>(count);
    }
    records.push_back(rec);
  }
  return records;
}

struct LoadHistogram {
  NetworkSpec spec;
  Algo algo = Algo::Dim;
  i64 flows = 0;
  u64 seed = 0;
  std::map<i64, i64> bins;  // link load -> number of physical links
  i64 total_links = 0;
  i64 max_load = 0;
  i64 total_load = 0;
};

// Routes `flows` sampled one-to-one flows and tallies per-physical-link load.
// A switch-transit hop loads both server-switch links; a direct hop loads the
// one server-server link.
inline LoadHistogram run_loadsim(const Topology& topo, Algo algo, i64 flows, u64 seed,
                                 const BenchSettings& settings = {}) {
  if (flows < 0) throw InvalidCount("flow count must be non-negative");
  if (algo == Algo::Bfs)
    throw PreconditionViolated("load simulation supports dim and proxy algorithms");
  const NetworkSpec& spec = topo.spec();
  const LevelSizes& sizes = topo.sizes();
  auto pairs = sample_pairs(sizes, flows, seed);

  i64 n_servers = topo.server_count();
  i64 n_direct = topo.direct_link_count();
  int workers = std::max(1, settings.threads);
  std::vector<std::vector<i64>> switch_loads(
      static_cast<size_t>(workers), std::vector<i64>(static_cast<size_t>(n_servers), 0));
  std::vector<std::vector<i64>> direct_loads(
      static_cast<size_t>(workers), std::vector<i64>(static_cast<size_t>(n_direct), 0));

  std::atomic<int> next_worker{0};
  parallel_for(flows, workers, [&](i64 begin, i64 end) {
    int w = next_worker.fetch_add(1);
    auto& sw = switch_loads[static_cast<size_t>(w)];
    auto& dl = direct_loads[static_cast<size_t>(w)];
    PrOptions opts = detail::options_for(algo, settings.proxy);
    for (i64 i = begin; i < end; ++i) {
      auto [src, dst] = pairs[static_cast<size_t>(i)];
      Route route = (algo == Algo::Dim) ? dim_route(spec, sizes, src, dst)
                                        : pr_route(spec, sizes, src, dst, opts);
      for (size_t h = 0; h + 1 < route.hops.size(); ++h) {
        i64 u = route.hops[h], v = route.hops[h + 1];
        if (const DirectLink* link = topo.find_direct(u, v)) {
          dl[static_cast<size_t>(link->link_id)]++;
        } else {
          sw[static_cast<size_t>(u)]++;
          sw[static_cast<size_t>(v)]++;
        }
      }
    }
  });

  LoadHistogram hist;
  hist.spec = spec;
  hist.algo = algo;
  hist.flows = flows;
  hist.seed = seed;
  hist.total_links = topo.physical_link_count();
  auto account = [&](i64 load) {
    hist.bins[load]++;
    hist.max_load = std::max(hist.max_load, load);
    hist.total_load += load;
  };
  for (i64 u = 0; u < n_servers; ++u) {
    i64 load = 0;
    for (int w = 0; w < workers; ++w) load += switch_loads[static_cast<size_t>(w)][static_cast<size_t>(u)];
    account(load);
  }
  for (i64 l = 0; l < n_direct; ++l) {
    i64 load = 0;
    for (int w = 0; w < workers; ++w) load += direct_loads[static_cast<size_t>(w)][static_cast<size_t>(l)];
    account(load);
  }
  return hist;
}

namespace detail {

inline std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace detail

inline void export_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "family,k,n,algo,pairs,seed,mean_len,sem,savings_pct,mean_candidates,"
         "mean_good_routes,success_rate_pct,max_len\n";
  for (const auto& r : records) {
    out << family_name(r.spec.family) << ',' << r.spec.k << ',' << r.spec.n << ','
        << algo_name(r.algo) << ',' << r.pairs << ',' << r.seed << ',';
    if (r.skipped) {
      out << ",,,,,,skipped\n";
      continue;
    }
    out << detail::fmt6(r.mean_len) << ',' << detail::fmt6(r.sem) << ','
        << detail::fmt6(r.savings_pct) << ',';
    if (r.mean_candidates) out << detail::fmt6(*r.mean_candidates);
    out << ',';
    if (r.mean_good_routes) out << detail::fmt6(*r.mean_good_routes);
    out << ',' << detail::fmt6(r.success_rate_pct) << ',' << r.max_len << '\n';
  }
  if (!out) throw IoError("failed writing bench CSV");
}

inline void export_hist_csv(const LoadHistogram& hist, std::ostream& out,
                            i64 bin_width = 1) {
  if (bin_width < 1) throw PreconditionViolated("bin width must be >= 1");
  out << "load,count,fraction\n";
  std::map<i64, i64> binned;
  for (const auto& [load, cnt] : hist.bins) binned[(load / bin_width) * bin_width] += cnt;
  for (const auto& [load, cnt] : binned) {
    double frac = hist.total_links > 0
                      ? static_cast<double>(cnt) / static_cast<double>(hist.total_links)
                      : 0.0;
    out << load << ',' << cnt << ',' << detail::fmt6(frac) << '\n';
  }
  if (!out) throw IoError("failed writing histogram CSV");
}

}  // namespace gcell
