#pragma once

#include <utility>
#include <vector>

#include "gcell/spec.hpp"

namespace gcell {

// The unique level-m link between substructures x < y of one level-m group.
// Node indices are uids local to each substructure; "global" means local to the
// enclosing level-m structure (local + index * t_{m-1}).
struct LinkEndpoints {
  int level = 0;
  i64 lower_index = 0;
  i64 higher_index = 0;
  i64 node_in_lower = 0;
  i64 node_in_higher = 0;
  i64 global_lower = 0;
  i64 global_higher = 0;
};

// On c in [lo, hi), the mapped node index equals slope * c + intercept.
struct LinearSegment {
  i64 lo = 0;
  i64 hi = 0;
  i64 slope = 0;
  i64 intercept = 0;

  i64 eval(i64 c) const { return slope * c + intercept; }
  bool contains(i64 c) const { return c >= lo && c < hi; }
};

// A level-m connection rule: the perfect matching that places exactly one link
// between every pair of level-(m-1) substructures.  Pluggable so further
// matchings can be added beside the three built-ins.
class ConnectionRule {
 public:
  virtual ~ConnectionRule() = default;

  // Local node indices (in x, in y) of the link between x < y.
  virtual std::pair<i64, i64> link_nodes(const LevelSizes& sizes, int m, i64 x,
                                         i64 y) const = 0;

  // v -> u^v, the node inside substructure u linked toward substructure v,
  // as segments covering [0, g_m) \ {u}.
  virtual std::vector<LinearSegment> exit_segments(const LevelSizes& sizes, int m,
                                                   i64 u) const = 0;

  // c -> c^u, the node inside substructure c linked toward the fixed
  // substructure u, as segments covering [0, g_m) \ {u}.
  virtual std::vector<LinearSegment> entry_segments(const LevelSizes& sizes, int m,
                                                    i64 u) const = 0;
};

class DCellRule final : public ConnectionRule {
 public:
  std::pair<i64, i64> link_nodes(const LevelSizes&, int, i64 x, i64 y) const override {
    return {y - 1, x};
  }
  std::vector<LinearSegment> exit_segments(const LevelSizes& sizes, int m,
                                           i64 u) const override {
    i64 gm = sizes.g_at(m);
    return {{0, u, 1, 0}, {u + 1, gm, 1, -1}};
  }
  std::vector<LinearSegment> entry_segments(const LevelSizes& sizes, int m,
                                            i64 u) const override {
    i64 gm = sizes.g_at(m);
    return {{0, u, 0, u - 1}, {u + 1, gm, 0, u}};
  }
};

class BetaDCellRule final : public ConnectionRule {
 public:
  std::pair<i64, i64> link_nodes(const LevelSizes& sizes, int m, i64 x,
                                 i64 y) const override {
    i64 t = sizes.t_at(m - 1);
    return {y - x - 1, t - y + x};
  }
  std::vector<LinearSegment> exit_segments(const LevelSizes& sizes, int m,
                                           i64 u) const override {
    i64 gm = sizes.g_at(m);
    i64 t = sizes.t_at(m - 1);
    return {{0, u, 1, t - u}, {u + 1, gm, 1, -u - 1}};
  }
  std::vector<LinearSegment> entry_segments(const LevelSizes& sizes, int m,
                                            i64 u) const override {
    i64 gm = sizes.g_at(m);
    i64 t = sizes.t_at(m - 1);
    return {{0, u, -1, u - 1}, {u + 1, gm, -1, t + u}};
  }
};

class FiConnRule final : public ConnectionRule {
 public:
  std::pair<i64, i64> link_nodes(const LevelSizes&, int m, i64 x, i64 y) const override {
    i64 pow2m = i64{1} << m;
    i64 half = pow2m / 2;
    return {(y - 1) * pow2m + half - 1, x * pow2m + half - 1};
  }
  std::vector<LinearSegment> exit_segments(const LevelSizes& sizes, int m,
                                           i64 u) const override {
    i64 gm = sizes.g_at(m);
    i64 pow2m = i64{1} << m;
    i64 half = pow2m / 2;
    return {{0, u, pow2m, half - 1}, {u + 1, gm, pow2m, -pow2m + half - 1}};
  }
  std::vector<LinearSegment> entry_segments(const LevelSizes& sizes, int m,
                                            i64 u) const override {
    i64 gm = sizes.g_at(m);
    i64 pow2m = i64{1} << m;
    i64 half = pow2m / 2;
    return {{0, u, 0, (u - 1) * pow2m + half - 1}, {u + 1, gm, 0, u * pow2m + half - 1}};
  }
};

inline const ConnectionRule& rule_for(Family family) {
  static const DCellRule dcell;
  static const BetaDCellRule beta;
  static const FiConnRule ficonn;
  switch (family) {
    case Family::DCell: return dcell;
    case Family::BetaDCell: return beta;
    case Family::FiConn: return ficonn;
  }
  throw InternalError("unknown family");
}

inline void check_level_index(const LevelSizes& sizes, int m, i64 x, i64 y) {
  if (m < 1 || m > sizes.k())
    throw LevelOutOfRange("level " + std::to_string(m) + " outside [1, " +
                          std::to_string(sizes.k()) + "]");
  i64 gm = sizes.g_at(m);
  if (x < 0 || y < 0 || x >= gm || y >= gm || x >= y)
    throw IndexOutOfRange("need 0 <= x < y < " + std::to_string(gm) + ", got x=" +
                          std::to_string(x) + " y=" + std::to_string(y));
}

inline LinkEndpoints link_endpoints(const NetworkSpec& spec, const LevelSizes& sizes,
                                    int m, i64 x, i64 y) {
  check_level_index(sizes, m, x, y);
  auto [nx, ny] = rule_for(spec.family).link_nodes(sizes, m, x, y);
  i64 t = sizes.t_at(m - 1);
  LinkEndpoints e;
  e.level = m;
  e.lower_index = x;
  e.higher_index = y;
  e.node_in_lower = nx;
  e.node_in_higher = ny;
  e.global_lower = nx + x * t;
  e.global_higher = ny + y * t;
  return e;
}

// Local node inside `from` on the link toward `to` (either orientation).
inline i64 exit_node(const NetworkSpec& spec, const LevelSizes& sizes, int m, i64 from,
                     i64 to) {
  if (from < to) return link_endpoints(spec, sizes, m, from, to).node_in_lower;
  return link_endpoints(spec, sizes, m, to, from).node_in_higher;
}

inline std::vector<LinearSegment> connection_segments(const NetworkSpec& spec,
                                                      const LevelSizes& sizes, int m,
                                                      i64 u) {
  if (m < 1 || m > sizes.k())
    throw LevelOutOfRange("level " + std::to_string(m) + " outside [1, " +
                          std::to_string(sizes.k()) + "]");
  if (u < 0 || u >= sizes.g_at(m))
    throw IndexOutOfRange("index " + std::to_string(u) + " outside [0, " +
                          std::to_string(sizes.g_at(m)) + ")");
  return rule_for(spec.family).exit_segments(sizes, m, u);
}

inline std::vector<LinearSegment> entry_connection_segments(const NetworkSpec& spec,
                                                            const LevelSizes& sizes,
                                                            int m, i64 u) {
  if (m < 1 || m > sizes.k())
    throw LevelOutOfRange("level " + std::to_string(m) + " outside [1, " +
                          std::to_string(sizes.k()) + "]");
  if (u < 0 || u >= sizes.g_at(m))
    throw IndexOutOfRange("index " + std::to_string(u) + " outside [0, " +
                          std::to_string(sizes.g_at(m)) + ")");
  return rule_for(spec.family).entry_segments(sizes, m, u);
}

}  // namespace gcell
