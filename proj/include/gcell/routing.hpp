#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gcell/connection.hpp"
#include "gcell/labels.hpp"
#include "gcell/topology.hpp"

namespace gcell {

enum class RouteKind { Dimensional, Proxy, Shortest };

// Ordered server uids under the server-hop metric.  A length-0 route holds the
// single uid src == dst.
struct Route {
  std::vector<i64> hops;
  RouteKind kind = RouteKind::Dimensional;

  i64 length() const { return static_cast<i64>(hops.size()) - 1; }
};

// Smallest m such that src and dst share their level-m substructure; 0 means
// co-switch.  Precondition: src != dst.
inline int decision_level(const LevelSizes& sizes, i64 src, i64 dst) {
  for (int m = 0; m <= sizes.k(); ++m)
    if (src / sizes.t_at(m) == dst / sizes.t_at(m)) return m;
  throw InternalError("uids not in one structure");
}

namespace detail {

// Both endpoints of the level-m link between the substructures of src and dst,
// as uids global to the whole structure: (exit in src side, entry in dst side).
inline std::pair<i64, i64> crossing_link(const NetworkSpec& spec, const LevelSizes& sizes,
                                         int m, i64 src, i64 dst) {
  i64 child = sizes.t_at(m - 1);
  i64 base = (src / sizes.t_at(m)) * sizes.t_at(m);
  i64 a = (src - base) / child;
  i64 b = (dst - base) / child;
  LinkEndpoints e = (a < b) ? link_endpoints(spec, sizes, m, a, b)
                            : link_endpoints(spec, sizes, m, b, a);
  i64 exit_g = (a < b) ? e.global_lower : e.global_higher;
  i64 entry_g = (a < b) ? e.global_higher : e.global_lower;
  return {base + exit_g, base + entry_g};
}

inline void dim_route_rec(const NetworkSpec& spec, const LevelSizes& sizes, i64 src,
                          i64 dst, std::vector<i64>& out) {
  if (src == dst) return;
  int m = decision_level(sizes, src, dst);
  if (m == 0) {
    out.push_back(dst);
    return;
  }
  auto [exit_g, entry_g] = crossing_link(spec, sizes, m, src, dst);
  dim_route_rec(spec, sizes, src, exit_g, out);
  out.push_back(entry_g);
  dim_route_rec(spec, sizes, entry_g, dst, out);
}

inline i64 dim_len_rec(const NetworkSpec& spec, const LevelSizes& sizes, i64 src,
                       i64 dst) {
  if (src == dst) return 0;
  int m = decision_level(sizes, src, dst);
  if (m == 0) return 1;
  auto [exit_g, entry_g] = crossing_link(spec, sizes, m, src, dst);
  return dim_len_rec(spec, sizes, src, exit_g) + 1 + dim_len_rec(spec, sizes, entry_g, dst);
}

}  // namespace detail

inline Route dim_route(const NetworkSpec& spec, const LevelSizes& sizes, i64 src,
                       i64 dst) {
  check_uid(src, sizes);
  check_uid(dst, sizes);
  Route r;
  r.kind = RouteKind::Dimensional;
  r.hops.push_back(src);
  detail::dim_route_rec(spec, sizes, src, dst, r.hops);
  return r;
}

// Hop count of the dimensional route without building it.
inline i64 dim_len(const NetworkSpec& spec, const LevelSizes& sizes, i64 src, i64 dst) {
  check_uid(src, sizes);
  check_uid(dst, sizes);
  return detail::dim_len_rec(spec, sizes, src, dst);
}

// Breadth-first search under the server-hop metric with reusable buffers.
// Neighbor order is ascending uid, so tie-breaking is deterministic.  The
// co-switch clique is expanded through a per-switch visited flag instead of
// scanning n-1 neighbors at every server.
class BfsRunner {
 public:
  explicit BfsRunner(const Topology& topo)
      : topo_(topo), n_(topo.server_count()),
        parent_(static_cast<size_t>(n_), -1),
        dist_(static_cast<size_t>(n_), -1),
        switch_done_(static_cast<size_t>(topo.switch_count()), 0) {
    queue_.reserve(static_cast<size_t>(n_));
  }

  Route route(i64 src, i64 dst) {
    check_uid(src, sizes());
    check_uid(dst, sizes());
    Route r;
    r.kind = RouteKind::Shortest;
    if (src == dst) {
      r.hops.push_back(src);
      return r;
    }
    std::fill(dist_.begin(), dist_.end(), -1);
    std::fill(switch_done_.begin(), switch_done_.end(), 0);
    queue_.clear();
    dist_[static_cast<size_t>(src)] = 0;
    parent_[static_cast<size_t>(src)] = -1;
    queue_.push_back(src);
    bool found = false;
    for (size_t head = 0; head < queue_.size() && !found; ++head) {
      i64 u = queue_[head];
      i64 du = dist_[static_cast<size_t>(u)];
      const auto& links = topo_.direct_links(u);
      size_t li = 0;
      auto visit = [&](i64 v) {
        if (dist_[static_cast<size_t>(v)] != -1) return;
        dist_[static_cast<size_t>(v)] = du + 1;
        parent_[static_cast<size_t>(v)] = u;
        queue_.push_back(v);
        if (v == dst) found = true;
      };
      auto links_below = [&](i64 bound) {
        while (li < links.size() && links[li].peer < bound) visit(links[li++].peer);
      };
      i64 sw = topo_.switch_of(u);
      if (!switch_done_[static_cast<size_t>(sw)]) {
        switch_done_[static_cast<size_t>(sw)] = 1;
        i64 base = sw * topo_.spec().n;
        for (i64 v = base; v < base + topo_.spec().n; ++v) {
          if (v == u) continue;
          links_below(v);
          visit(v);
        }
      }
      links_below(n_);
    }
    if (dist_[static_cast<size_t>(dst)] == -1)
      throw InternalError("graph disconnected between " + std::to_string(src) + " and " +
                          std::to_string(dst));
    std::vector<i64> rev;
    for (i64 v = dst; v != -1; v = parent_[static_cast<size_t>(v)]) rev.push_back(v);
    r.hops.assign(rev.rbegin(), rev.rend());
    return r;
  }

  i64 distance(i64 src, i64 dst) { return route(src, dst).length(); }

 private:
  const LevelSizes& sizes() const { return topo_.sizes(); }

  const Topology& topo_;
  i64 n_;
  std::vector<i64> parent_;
  std::vector<i64> dist_;
  std::vector<char> switch_done_;
  std::vector<i64> queue_;
};

inline Route bfs_route(const Topology& topo, i64 src, i64 dst) {
  BfsRunner runner(topo);
  return runner.route(src, dst);
}

// Number of maximal runs of consecutive hops inside one level-(m-1)
// substructure; the route must stay inside a single level-m substructure.
inline int route_order(const NetworkSpec&, const LevelSizes& sizes, const Route& route,
                       int m) {
  if (m < 1 || m > sizes.k()) throw LevelOutOfRange("route_order: bad level");
  if (route.hops.empty()) throw PreconditionViolated("route_order: empty route");
  i64 tm = sizes.t_at(m);
  i64 child = sizes.t_at(m - 1);
  i64 container = route.hops.front() / tm;
  int runs = 0;
  i64 prev = -1;
  for (i64 u : route.hops) {
    if (u / tm != container)
      throw PreconditionViolated("route leaves its level-" + std::to_string(m) +
                                 " substructure");
    i64 copy = u / child;
    if (copy != prev) {
      ++runs;
      prev = copy;
    }
  }
  return runs;
}

struct RouteCheck {
  bool ok = true;
  std::string violation;
};

inline RouteCheck route_is_valid(const Topology& topo, const Route& route) {
  RouteCheck check;
  if (route.hops.empty()) {
    check.ok = false;
    check.violation = "empty hop list";
    return check;
  }
  std::vector<i64> seen = route.hops;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    check.ok = false;
    check.violation = "repeated server uid";
    return check;
  }
  for (size_t i = 0; i + 1 < route.hops.size(); ++i) {
    if (!topo.adjacent(route.hops[i], route.hops[i + 1])) {
      check.ok = false;
      check.violation = "hop " + std::to_string(route.hops[i]) + " -> " +
                        std::to_string(route.hops[i + 1]) + " is not server-hop adjacent";
      return check;
    }
  }
  return check;
}

}  // namespace gcell
