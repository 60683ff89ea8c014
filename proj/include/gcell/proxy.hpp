#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "gcell/routing.hpp"

namespace gcell {

enum class GpVariant { Exhaustive, Interval, Zero };

inline const char* gp_variant_name(GpVariant v) {
  switch (v) {
    case GpVariant::Exhaustive: return "gp_e";
    case GpVariant::Interval: return "gp_i";
    case GpVariant::Zero: return "gp_0";
  }
  return "?";
}

struct PropertySet {
  bool p1 = true;
  bool p2 = false;
  bool p3 = true;
};

struct CandidateInterval {
  i64 lo = 0;
  i64 hi = 0;  // half-open
};

struct Candidate {
  i64 index = 0;
  bool p1 = false;
  bool p2 = false;
  bool p3 = false;
};

struct ProxyCandidateSet {
  int level = 0;
  i64 a = 0;
  i64 b = 0;
  bool null_result = false;
  std::vector<Candidate> candidates;  // ascending index, a and b excluded
  std::vector<CandidateInterval> p1_intervals;
  std::vector<CandidateInterval> p2_intervals;
  std::vector<CandidateInterval> p3_intervals;

  std::vector<i64> indices() const {
    std::vector<i64> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(c.index);
    return out;
  }
};

struct ProxySelection {
  i64 proxy = 0;
  i64 total_length = 0;
  i64 dim_length = 0;
  i64 exit_a = 0;   // global uids of the two proxy links: a^c, c^a, c^b, b^c
  i64 entry_c = 0;
  i64 exit_c = 0;
  i64 entry_b = 0;
  std::vector<std::pair<i64, i64>> examined;  // (candidate, route length)
  i64 good_route_count = 0;                   // #{c : length(c) <= dim_length}
};

// Bounded cache of dimensional-route lengths.  Dimensional routing is
// identical in every copy of a substructure, so entries are keyed by level and
// the uids local to that level's substructure rather than by which copy they
// sit in.  Concurrent use is safe; racing writers are last-writer-wins.
class DimLenCache {
 public:
  explicit DimLenCache(size_t capacity = size_t{1} << 22) : capacity_(capacity) {}

  std::optional<i64> get(int level, i64 local_src, i64 local_dst) const {
    std::shared_lock lock(mu_);
    auto it = map_.find(Key{level, local_src, local_dst});
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void put(int level, i64 local_src, i64 local_dst, i64 len) {
    std::unique_lock lock(mu_);
    if (map_.size() >= capacity_) return;
    map_[Key{level, local_src, local_dst}] = len;
  }

  size_t size() const {
    std::shared_lock lock(mu_);
    return map_.size();
  }

 private:
  struct Key {
    int level;
    i64 src;
    i64 dst;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      u64 h = static_cast<u64>(k.level);
      h = h * 0x9E3779B97F4A7C15ull + static_cast<u64>(k.src);
      h = h * 0x9E3779B97F4A7C15ull + static_cast<u64>(k.dst);
      return static_cast<size_t>(h ^ (h >> 29));
    }
  };

  size_t capacity_;
  mutable std::shared_mutex mu_;
  std::unordered_map<Key, i64, KeyHash> map_;
};

struct PrOptions {
  GpVariant variant = GpVariant::Exhaustive;
  bool p2_interval = false;   // enable the middle-subpath property for GP_I
  bool p2_zero = false;       // and for GP_0
  bool null_check_or = false; // use OR instead of AND in the GP_I/GP_0 null check
  bool recursive_subpaths = false;
  DimLenCache* cache = nullptr;
};

namespace detail {

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

// c in [seg.lo, seg.hi) with seg.eval(c) in [lo_val, hi_val).
inline std::optional<CandidateInterval> invert_segment(const LinearSegment& seg,
                                                       i64 lo_val, i64 hi_val) {
  i64 lo, hi;  // inclusive c bounds
  if (seg.slope == 0) {
    if (seg.intercept < lo_val || seg.intercept >= hi_val) return std::nullopt;
    lo = seg.lo;
    hi = seg.hi - 1;
  } else if (seg.slope > 0) {
    lo = ceil_div(lo_val - seg.intercept, seg.slope);
    hi = floor_div(hi_val - 1 - seg.intercept, seg.slope);
  } else {
    i64 s = -seg.slope;
    lo = ceil_div(seg.intercept - (hi_val - 1), s);
    hi = floor_div(seg.intercept - lo_val, s);
  }
  lo = std::max(lo, seg.lo);
  hi = std::min(hi, seg.hi - 1);
  if (lo > hi) return std::nullopt;
  return CandidateInterval{lo, hi + 1};
}

// Coordinates of a cross-substructure pair inside its level-m substructure.
struct GpFrame {
  i64 base = 0;   // uid of the first server of the level-m substructure
  i64 child = 0;  // t_{m-1}
  i64 gm = 0;
  i64 a = 0;
  i64 b = 0;
  i64 src_local = 0;  // uid local to substructure a
  i64 dst_local = 0;  // uid local to substructure b
};

inline GpFrame gp_frame(const LevelSizes& sizes, int m, i64 src, i64 dst) {
  if (m < 1 || m > sizes.k()) throw LevelOutOfRange("GP level outside [1, k]");
  GpFrame f;
  i64 tm = sizes.t_at(m);
  f.base = (src / tm) * tm;
  f.child = sizes.t_at(m - 1);
  f.gm = sizes.g_at(m);
  if (dst / tm != src / tm)
    throw PreconditionViolated("src and dst not in one level-" + std::to_string(m) +
                               " substructure");
  f.a = (src - f.base) / f.child;
  f.b = (dst - f.base) / f.child;
  if (f.a == f.b)
    throw PreconditionViolated("src and dst share their level-" + std::to_string(m - 1) +
                               " substructure");
  f.src_local = (src - f.base) % f.child;
  f.dst_local = (dst - f.base) % f.child;
  return f;
}

}  // namespace detail

// Evaluates the three-segment proxy composition for each candidate and returns
// the minimizer (ties to the smallest index), or absent on empty input.
inline std::optional<ProxySelection> select_proxy(const NetworkSpec& spec,
                                                  const LevelSizes& sizes, i64 src,
                                                  i64 dst, int m,
                                                  const std::vector<i64>& candidates,
                                                  DimLenCache* cache = nullptr) {
  check_uid(src, sizes);
  check_uid(dst, sizes);
  detail::GpFrame f = detail::gp_frame(sizes, m, src, dst);
  if (candidates.empty()) return std::nullopt;

  auto sub_len = [&](i64 x, i64 y) -> i64 {
    if (cache != nullptr) {
      i64 lx = x % f.child, ly = y % f.child;
      if (auto hit = cache->get(m - 1, lx, ly)) return *hit;
      i64 len = dim_len(spec, sizes, x, y);
      cache->put(m - 1, lx, ly, len);
      return len;
    }
    return dim_len(spec, sizes, x, y);
  };

  ProxySelection sel;
  sel.dim_length = dim_len(spec, sizes, src, dst);
  sel.examined.reserve(candidates.size());
  bool have = false;
  for (i64 c : candidates) {
    if (c < 0 || c >= f.gm || c == f.a || c == f.b)
      throw PreconditionViolated("candidate " + std::to_string(c) +
                                 " is not a valid proxy index");
    i64 a_c = f.base + f.a * f.child + exit_node(spec, sizes, m, f.a, c);
    i64 c_a = f.base + c * f.child + exit_node(spec, sizes, m, c, f.a);
    i64 c_b = f.base + c * f.child + exit_node(spec, sizes, m, c, f.b);
    i64 b_c = f.base + f.b * f.child + exit_node(spec, sizes, m, f.b, c);
    i64 len = sub_len(src, a_c) + 1 + sub_len(c_a, c_b) + 1 + sub_len(b_c, dst);
    sel.examined.emplace_back(c, len);
    if (len <= sel.dim_length) ++sel.good_route_count;
    if (!have || len < sel.total_length) {
      have = true;
      sel.proxy = c;
      sel.total_length = len;
      sel.exit_a = a_c;
      sel.entry_c = c_a;
      sel.exit_c = c_b;
      sel.entry_b = b_c;
    }
  }
  return sel;
}

// Exhaustive proxy search over every candidate index except a and b.
inline std::optional<ProxySelection> gp_exhaustive(const NetworkSpec& spec,
                                                   const LevelSizes& sizes, i64 src,
                                                   i64 dst, int m,
                                                   DimLenCache* cache = nullptr) {
  detail::GpFrame f = detail::gp_frame(sizes, m, src, dst);
  std::vector<i64> universe;
  universe.reserve(static_cast<size_t>(f.gm));
  for (i64 c = 0; c < f.gm; ++c)
    if (c != f.a && c != f.b) universe.push_back(c);
  return select_proxy(spec, sizes, src, dst, m, universe, cache);
}

// Interval-based candidate generation.  Block size is t_{m-2} for the Interval
// variant and t_0 for the Zero variant; each enabled property is solved by
// inverting the linear segments of the relevant connection function.
//
// The middle-subpath property (P2) is applied only on segments whose entry
// functions actually vary with the candidate index; where both are constant
// the predicate cannot distinguish candidates and is treated as vacuous.
inline ProxyCandidateSet gp_intervals(const NetworkSpec& spec, const LevelSizes& sizes,
                                      i64 src, i64 dst, int m, GpVariant variant,
                                      PropertySet props,
                                      bool null_check_or = false) {
  check_uid(src, sizes);
  check_uid(dst, sizes);
  if (variant == GpVariant::Exhaustive)
    throw PreconditionViolated("gp_intervals expects the Interval or Zero variant");
  int min_level = (variant == GpVariant::Interval) ? 2 : 3;
  if (m < min_level)
    throw UnsupportedLevel(std::string(gp_variant_name(variant)) +
                           " requires level >= " + std::to_string(min_level));
  detail::GpFrame f = detail::gp_frame(sizes, m, src, dst);
  i64 block = (variant == GpVariant::Interval) ? sizes.t_at(m - 2) : sizes.t_at(0);

  ProxyCandidateSet set;
  set.level = m;
  set.a = f.a;
  set.b = f.b;

  // The null check always uses the t_{m-2} granularity, even for the Zero
  // variant.  A finer check would let GP_0 attempt pairs that GP_I refuses,
  // breaking the containment of its null set in GP_I's and with it the
  // per-pair ordering GP_E <= GP_I <= GP_0.
  i64 null_block = sizes.t_at(m - 2);
  i64 a_b = exit_node(spec, sizes, m, f.a, f.b);
  i64 b_a = exit_node(spec, sizes, m, f.b, f.a);
  bool src_near = a_b / null_block == f.src_local / null_block;
  bool dst_near = b_a / null_block == f.dst_local / null_block;
  bool is_null = null_check_or ? (src_near || dst_near) : (src_near && dst_near);
  if (is_null) {
    set.null_result = true;
    return set;
  }

  auto block_window = [&](i64 value) -> std::pair<i64, i64> {
    i64 lo = (value / block) * block;
    return {lo, lo + block};
  };

  // P1 / P3: the exit node of a (resp. b) shares src's (resp. dst's) block.
  auto same_block_as = [&](i64 owner, i64 target_value,
                           std::vector<CandidateInterval>& out) {
    auto [lo_val, hi_val] = block_window(target_value);
    for (const auto& seg : rule_for(spec.family).exit_segments(sizes, m, owner))
      if (auto iv = detail::invert_segment(seg, lo_val, hi_val)) out.push_back(*iv);
  };
  if (props.p1) same_block_as(f.a, f.src_local, set.p1_intervals);
  if (props.p3) same_block_as(f.b, f.dst_local, set.p3_intervals);

  // P2: the entry nodes from a and from b share one block inside the proxy.
  if (props.p2) {
    auto ea = rule_for(spec.family).entry_segments(sizes, m, f.a);
    auto eb = rule_for(spec.family).entry_segments(sizes, m, f.b);
    for (const auto& sa : ea)
      for (const auto& sb : eb) {
        i64 lo = std::max(sa.lo, sb.lo);
        i64 hi = std::min(sa.hi, sb.hi);
        if (lo >= hi) continue;
        if (sa.slope == 0 && sb.slope == 0) continue;  // vacuous on this region
        i64 va0 = sa.eval(lo), va1 = sa.eval(hi - 1);
        i64 jlo = std::min(va0, va1) / block;
        i64 jhi = std::max(va0, va1) / block;
        for (i64 j = jlo; j <= jhi; ++j) {
          LinearSegment ra{lo, hi, sa.slope, sa.intercept};
          LinearSegment rb{lo, hi, sb.slope, sb.intercept};
          auto ia = detail::invert_segment(ra, j * block, (j + 1) * block);
          if (!ia) continue;
          LinearSegment rb2{ia->lo, ia->hi, sb.slope, sb.intercept};
          auto ib = detail::invert_segment(rb2, j * block, (j + 1) * block);
          if (ib) set.p2_intervals.push_back(*ib);
        }
      }
  }

  std::map<i64, Candidate> merged;
  auto absorb = [&](const std::vector<CandidateInterval>& ivs, bool Candidate::* flag) {
    for (const auto& iv : ivs)
      for (i64 c = iv.lo; c < iv.hi; ++c) {
        if (c == f.a || c == f.b) continue;
        auto& cand = merged.try_emplace(c, Candidate{c}).first->second;
        cand.*flag = true;
      }
  };
  absorb(set.p1_intervals, &Candidate::p1);
  absorb(set.p2_intervals, &Candidate::p2);
  absorb(set.p3_intervals, &Candidate::p3);
  set.candidates.reserve(merged.size());
  for (auto& [c, cand] : merged) set.candidates.push_back(cand);
  return set;
}

struct PrResult {
  Route route;
  bool adopted = false;
  bool gp_null = false;
  i64 dim_length = 0;
  i64 candidates_examined = 0;
  i64 good_route_count = 0;
  std::optional<i64> proxy;
  int level = 0;  // decision level, 0 when src and dst are co-switch or equal
};

// PR: descend to the level where src and dst part ways, ask the selected GP
// variant for a proxy there, and adopt the proxy composition only when it is
// strictly shorter than the dimensional route.
inline PrResult pr_route_ex(const NetworkSpec& spec, const LevelSizes& sizes, i64 src,
                            i64 dst, const PrOptions& opts) {
  check_uid(src, sizes);
  check_uid(dst, sizes);
  PrResult res;
  if (src == dst) {
    res.route.hops.push_back(src);
    return res;
  }
  int m = decision_level(sizes, src, dst);
  res.level = m;
  res.dim_length = dim_len(spec, sizes, src, dst);
  if (m == 0) {  // co-switch pair: the one-hop route is already optimal
    res.route = dim_route(spec, sizes, src, dst);
    return res;
  }

  std::optional<ProxySelection> sel;
  switch (opts.variant) {
    case GpVariant::Exhaustive:
      sel = gp_exhaustive(spec, sizes, src, dst, m, opts.cache);
      break;
    case GpVariant::Interval:
    case GpVariant::Zero: {
      // GP_0 coincides with GP_I at level 2 and neither applies below that:
      // inside a level-1 substructure the dimensional route is at most 3 hops,
      // which no proxy route can beat.
      GpVariant effective =
          (opts.variant == GpVariant::Zero && m == 2) ? GpVariant::Interval : opts.variant;
      if (m < 2) {
        res.gp_null = true;
        break;
      }
      PropertySet props;
      props.p2 = (effective == GpVariant::Interval) ? opts.p2_interval : opts.p2_zero;
      ProxyCandidateSet cands = gp_intervals(spec, sizes, src, dst, m, effective, props,
                                             opts.null_check_or);
      if (cands.null_result) {
        res.gp_null = true;
        break;
      }
      sel = select_proxy(spec, sizes, src, dst, m, cands.indices(), opts.cache);
      break;
    }
  }

  if (sel) {
    res.candidates_examined = static_cast<i64>(sel->examined.size());
    res.good_route_count = sel->good_route_count;
  } else if (m >= 1 && !res.gp_null) {
    res.gp_null = true;  // empty candidate set
  }

  if (sel && sel->total_length < res.dim_length) {
    res.adopted = true;
    res.proxy = sel->proxy;
    auto sub_route = [&](i64 x, i64 y) -> Route {
      if (opts.recursive_subpaths) return pr_route_ex(spec, sizes, x, y, opts).route;
      return dim_route(spec, sizes, x, y);
    };
    Route r;
    r.kind = RouteKind::Proxy;
    Route first = sub_route(src, sel->exit_a);
    r.hops = std::move(first.hops);
    r.hops.push_back(sel->entry_c);
    Route mid = sub_route(sel->entry_c, sel->exit_c);
    r.hops.insert(r.hops.end(), mid.hops.begin() + 1, mid.hops.end());
    r.hops.push_back(sel->entry_b);
    Route last = sub_route(sel->entry_b, dst);
    r.hops.insert(r.hops.end(), last.hops.begin() + 1, last.hops.end());
    res.route = std::move(r);
  } else {
    res.route = dim_route(spec, sizes, src, dst);
  }
  return res;
}

inline Route pr_route(const NetworkSpec& spec, const LevelSizes& sizes, i64 src, i64 dst,
                      const PrOptions& opts = {}) {
  return pr_route_ex(spec, sizes, src, dst, opts).route;
}

}  // namespace gcell
