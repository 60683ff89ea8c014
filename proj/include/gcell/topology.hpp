#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gcell/connection.hpp"
#include "gcell/labels.hpp"
#include "gcell/spec.hpp"

namespace gcell {

enum class HopKind { SwitchTransit, Direct };

struct DirectLink {
  i64 peer = 0;
  int level = 0;
  i64 link_id = 0;  // dense id over all direct links, used by the load simulator
};

struct Neighbor {
  i64 uid = 0;
  HopKind kind = HopKind::SwitchTransit;
  int level = 0;  // 0 for switch-transit hops
};

// Materialized bipartite server/switch graph.  Switches are implicit: switch
// floor(u/n) owns servers [s*n, (s+1)*n), and the co-switch clique is only
// exposed through server_neighbors, never stored as edges.
class Topology {
 public:
  Topology(NetworkSpec spec, LevelSizes sizes)
      : spec_(spec), sizes_(std::move(sizes)),
        direct_(static_cast<size_t>(sizes_.servers())) {}

  const NetworkSpec& spec() const { return spec_; }
  const LevelSizes& sizes() const { return sizes_; }
  i64 server_count() const { return sizes_.servers(); }
  i64 switch_count() const { return sizes_.servers() / spec_.n; }
  i64 direct_link_count() const { return direct_link_count_; }
  i64 physical_link_count() const { return server_count() + direct_link_count_; }
  i64 switch_of(i64 uid) const { return uid / spec_.n; }

  const std::vector<DirectLink>& direct_links(i64 uid) const {
    return direct_[static_cast<size_t>(uid)];
  }

  void add_direct_link(i64 u, i64 v, int level) {
    i64 id = direct_link_count_++;
    direct_[static_cast<size_t>(u)].push_back({v, level, id});
    direct_[static_cast<size_t>(v)].push_back({u, level, id});
  }

  // Sorts per-server link lists by peer uid; call once after construction.
  void finalize() {
    for (auto& links : direct_)
      std::sort(links.begin(), links.end(),
                [](const DirectLink& a, const DirectLink& b) { return a.peer < b.peer; });
  }

  const DirectLink* find_direct(i64 u, i64 v) const {
    for (const auto& l : direct_[static_cast<size_t>(u)])
      if (l.peer == v) return &l;
    return nullptr;
  }

  bool adjacent(i64 u, i64 v) const {
    if (u == v) return false;
    if (switch_of(u) == switch_of(v)) return true;
    return find_direct(u, v) != nullptr;
  }

  // The n-1 co-switch servers plus all directly linked servers, ascending uid.
  std::vector<Neighbor> server_neighbors(i64 uid) const {
    check_uid(uid, sizes_);
    std::vector<Neighbor> out;
    i64 base = switch_of(uid) * spec_.n;
    const auto& links = direct_[static_cast<size_t>(uid)];
    size_t li = 0;
    auto push_links_below = [&](i64 bound) {
      while (li < links.size() && links[li].peer < bound) {
        out.push_back({links[li].peer, HopKind::Direct, links[li].level});
        ++li;
      }
    };
    for (i64 v = base; v < base + spec_.n; ++v) {
      if (v == uid) continue;
      push_links_below(v);
      out.push_back({v, HopKind::SwitchTransit, 0});
    }
    push_links_below(sizes_.servers());
    return out;
  }

  // Test support: drops the u-v direct link from both adjacency lists.
  void remove_direct_link(i64 u, i64 v) {
    auto drop = [&](i64 a, i64 b) {
      auto& links = direct_[static_cast<size_t>(a)];
      links.erase(std::remove_if(links.begin(), links.end(),
                                 [&](const DirectLink& l) { return l.peer == b; }),
                  links.end());
    };
    drop(u, v);
    drop(v, u);
  }

 private:
  NetworkSpec spec_;
  LevelSizes sizes_;
  std::vector<std::vector<DirectLink>> direct_;
  i64 direct_link_count_ = 0;
};

constexpr i64 kDefaultCapacityBytes = i64{16} * 1024 * 1024 * 1024;

inline i64 estimate_graph_bytes(const NetworkSpec& spec, const LevelSizes& sizes) {
  i64 n = sizes.servers();
  i64 direct_links = 0;
  for (int m = 1; m <= spec.k; ++m) {
    i64 groups = n / sizes.t_at(m);
    i64 gm = sizes.g_at(m);
    direct_links += groups * (gm * (gm - 1) / 2);
  }
  // vector header per server plus two DirectLink entries per link
  return checked_add(checked_mul(n, 32, "graph size"),
                     checked_mul(direct_links, 2 * i64{sizeof(DirectLink)}, "graph size"),
                     "graph size");
}

inline Topology build_graph(const NetworkSpec& spec,
                            i64 capacity_budget_bytes = kDefaultCapacityBytes) {
  LevelSizes sizes = compute_sizes(spec);
  i64 estimate = estimate_graph_bytes(spec, sizes);
  if (estimate > capacity_budget_bytes)
    throw CapacityExceeded(spec.name() + " needs about " + std::to_string(estimate) +
                           " bytes of adjacency, over the budget of " +
                           std::to_string(capacity_budget_bytes));
  Topology topo(spec, sizes);
  for (int m = 1; m <= spec.k; ++m) {
    i64 group_size = sizes.t_at(m);
    i64 groups = sizes.servers() / group_size;
    i64 gm = sizes.g_at(m);
    for (i64 group = 0; group < groups; ++group) {
      i64 base = group * group_size;
      for (i64 x = 0; x < gm; ++x) {
        for (i64 y = x + 1; y < gm; ++y) {
          LinkEndpoints e = link_endpoints(spec, sizes, m, x, y);
          topo.add_direct_link(base + e.global_lower, base + e.global_higher, m);
        }
      }
    }
  }
  topo.finalize();
  return topo;
}

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Audits every structural invariant on the built adjacency.  Violations are
// report entries with a witness, not failures.
inline ValidationReport validate(const Topology& topo) {
  ValidationReport report;
  const NetworkSpec& spec = topo.spec();
  const LevelSizes& sizes = topo.sizes();
  i64 n_servers = topo.server_count();

  auto note = [&](std::string msg) {
    if (report.issues.size() < 1000) report.issues.push_back(std::move(msg));
  };

  for (i64 u = 0; u < n_servers; ++u) {
    const auto& links = topo.direct_links(u);
    std::vector<int> per_level(static_cast<size_t>(spec.k) + 1, 0);
    for (const auto& l : links) {
      if (l.peer < 0 || l.peer >= n_servers || l.peer == u) {
        note("server " + std::to_string(u) + " has a bad peer " + std::to_string(l.peer));
        continue;
      }
      if (topo.switch_of(l.peer) == topo.switch_of(u))
        note("direct link " + std::to_string(u) + "-" + std::to_string(l.peer) +
             " joins co-switch servers");
      if (l.level < 1 || l.level > spec.k)
        note("link " + std::to_string(u) + "-" + std::to_string(l.peer) +
             " has bad level " + std::to_string(l.level));
      else
        per_level[static_cast<size_t>(l.level)]++;
      const DirectLink* back = topo.find_direct(l.peer, u);
      if (back == nullptr)
        note("link " + std::to_string(u) + "-" + std::to_string(l.peer) +
             " missing its reverse entry");
    }
    if (spec.family == Family::FiConn) {
      if (links.size() > 1)
        note("ficonn server " + std::to_string(u) + " has " +
             std::to_string(links.size()) + " direct links (max 1)");
    } else {
      for (int j = 1; j <= spec.k; ++j)
        if (per_level[static_cast<size_t>(j)] != 1)
          note("server " + std::to_string(u) + " has " +
               std::to_string(per_level[static_cast<size_t>(j)]) + " level-" +
               std::to_string(j) + " links (want 1)");
    }
  }

  // Complete connection: each pair of child copies inside one group is joined
  // by exactly one link of that level.
  for (int m = 1; m <= spec.k; ++m) {
    i64 group_size = sizes.t_at(m);
    i64 child_size = sizes.t_at(m - 1);
    i64 gm = sizes.g_at(m);
    i64 groups = n_servers / group_size;
    std::vector<i64> pair_count(static_cast<size_t>(gm * (gm - 1) / 2));
    for (i64 group = 0; group < groups; ++group) {
      std::fill(pair_count.begin(), pair_count.end(), 0);
      i64 base = group * group_size;
      for (i64 u = base; u < base + group_size; ++u) {
        for (const auto& l : topo.direct_links(u)) {
          if (l.level != m || l.peer < u) continue;
          if (l.peer < base || l.peer >= base + group_size) {
            note("level-" + std::to_string(m) + " link " + std::to_string(u) + "-" +
                 std::to_string(l.peer) + " escapes its group");
            continue;
          }
          i64 x = (u - base) / child_size;
          i64 y = (l.peer - base) / child_size;
          if (x == y) {
            note("level-" + std::to_string(m) + " link " + std::to_string(u) + "-" +
                 std::to_string(l.peer) + " stays inside one child copy");
            continue;
          }
          if (x > y) std::swap(x, y);
          pair_count[static_cast<size_t>(y * (y - 1) / 2 + x)]++;
        }
      }
      for (i64 y = 1; y < gm; ++y)
        for (i64 x = 0; x < y; ++x) {
          i64 c = pair_count[static_cast<size_t>(y * (y - 1) / 2 + x)];
          if (c != 1)
            note("group " + std::to_string(group) + " level " + std::to_string(m) +
                 ": child copies (" + std::to_string(x) + "," + std::to_string(y) +
                 ") joined by " + std::to_string(c) + " links (want 1)");
        }
    }
  }
  return report;
}

inline std::vector<Neighbor> server_neighbors(const Topology& topo, i64 uid) {
  return topo.server_neighbors(uid);
}

}  // namespace gcell
