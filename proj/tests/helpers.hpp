#pragma once

// Shared reference implementations for the tests.  These recompute results by
// the most direct means available (pointwise evaluation, queue-based search)
// so the library's closed-form and interval logic is checked against an
// independent path.
#include <deque>
#include <set>
#include <vector>

#include "gcell/gcell.hpp"

namespace testref {

using namespace gcell;

// Shortest server-hop distance by plain breadth-first search over
// server_neighbors, independent of BfsRunner's switch-flag optimization.
inline i64 reference_bfs_len(const Topology& topo, i64 src, i64 dst) {
  if (src == dst) return 0;
  std::vector<i64> dist(static_cast<size_t>(topo.server_count()), -1);
  std::deque<i64> queue{src};
  dist[static_cast<size_t>(src)] = 0;
  while (!queue.empty()) {
    i64 u = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : topo.server_neighbors(u)) {
      if (dist[static_cast<size_t>(nb.uid)] != -1) continue;
      dist[static_cast<size_t>(nb.uid)] = dist[static_cast<size_t>(u)] + 1;
      if (nb.uid == dst) return dist[static_cast<size_t>(nb.uid)];
      queue.push_back(nb.uid);
    }
  }
  return -1;
}

// Pointwise proxy-candidate filter: evaluates each property for every index c
// directly from exit_node, mirroring the documented semantics (block windows,
// the t_{m-2} null granularity, and P2's vacuity on regions where neither
// entry function varies with c).
struct PointwiseGp {
  bool null_result = false;
  std::set<i64> candidates;
};

inline PointwiseGp pointwise_gp(const NetworkSpec& spec, const LevelSizes& sizes, i64 src,
                                i64 dst, int m, GpVariant variant, PropertySet props,
                                bool null_check_or = false) {
  PointwiseGp out;
  i64 tm = sizes.t_at(m);
  i64 child = sizes.t_at(m - 1);
  i64 base = (src / tm) * tm;
  i64 a = (src - base) / child;
  i64 b = (dst - base) / child;
  i64 src_local = (src - base) % child;
  i64 dst_local = (dst - base) % child;
  i64 gm = sizes.g_at(m);
  i64 block = (variant == GpVariant::Interval) ? sizes.t_at(m - 2) : sizes.t_at(0);
  i64 null_block = sizes.t_at(m - 2);

  bool src_near = exit_node(spec, sizes, m, a, b) / null_block == src_local / null_block;
  bool dst_near = exit_node(spec, sizes, m, b, a) / null_block == dst_local / null_block;
  out.null_result = null_check_or ? (src_near || dst_near) : (src_near && dst_near);
  if (out.null_result) return out;

  auto slope_at = [&](const std::vector<LinearSegment>& segs, i64 c) -> i64 {
    for (const auto& seg : segs)
      if (seg.contains(c)) return seg.slope;
    return 0;
  };
  auto entry_a = rule_for(spec.family).entry_segments(sizes, m, a);
  auto entry_b = rule_for(spec.family).entry_segments(sizes, m, b);

  for (i64 c = 0; c < gm; ++c) {
    if (c == a || c == b) continue;
    bool keep = false;
    if (props.p1 && exit_node(spec, sizes, m, a, c) / block == src_local / block)
      keep = true;
    if (props.p3 && exit_node(spec, sizes, m, b, c) / block == dst_local / block)
      keep = true;
    if (props.p2 && (slope_at(entry_a, c) != 0 || slope_at(entry_b, c) != 0) &&
        exit_node(spec, sizes, m, c, a) / block == exit_node(spec, sizes, m, c, b) / block)
      keep = true;
    if (keep) out.candidates.insert(c);
  }
  return out;
}

// Minimum three-segment proxy composition length by direct evaluation.
inline std::pair<i64, i64> pointwise_best_proxy(const NetworkSpec& spec,
                                                const LevelSizes& sizes, i64 src, i64 dst,
                                                int m) {
  i64 tm = sizes.t_at(m);
  i64 child = sizes.t_at(m - 1);
  i64 base = (src / tm) * tm;
  i64 a = (src - base) / child;
  i64 b = (dst - base) / child;
  i64 best_c = -1, best_len = -1;
  for (i64 c = 0; c < sizes.g_at(m); ++c) {
    if (c == a || c == b) continue;
    i64 a_c = base + a * child + exit_node(spec, sizes, m, a, c);
    i64 c_a = base + c * child + exit_node(spec, sizes, m, c, a);
    i64 c_b = base + c * child + exit_node(spec, sizes, m, c, b);
    i64 b_c = base + b * child + exit_node(spec, sizes, m, b, c);
    i64 len = dim_len(spec, sizes, src, a_c) + 1 + dim_len(spec, sizes, c_a, c_b) + 1 +
              dim_len(spec, sizes, b_c, dst);
    if (best_len < 0 || len < best_len) {
      best_len = len;
      best_c = c;
    }
  }
  return {best_c, best_len};
}

}  // namespace testref
