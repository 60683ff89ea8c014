#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcell {

using i64 = std::int64_t;
using u64 = std::uint64_t;

enum class Family { DCell, BetaDCell, FiConn };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::DCell: return "dcell";
    case Family::BetaDCell: return "beta_dcell";
    case Family::FiConn: return "ficonn";
  }
  return "?";
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpec : Error { using Error::Error; };
struct NonIntegralFiConn : Error { using Error::Error; };
struct Overflow : Error { using Error::Error; };
struct UidOutOfRange : Error { using Error::Error; };
struct DigitOutOfRange : Error { using Error::Error; };
struct LevelOutOfRange : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct CapacityExceeded : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct UnsupportedLevel : Error { using Error::Error; };
struct InvalidCount : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct InternalError : Error { using Error::Error; };

// Family plus the two construction parameters (recursion depth k, switch ports n).
struct NetworkSpec {
  Family family = Family::DCell;
  int k = 0;
  i64 n = 0;

  void validate() const {
    if (k < 0) throw InvalidSpec("k must be non-negative, got " + std::to_string(k));
    if (family == Family::FiConn) {
      if (n <= 3 || n % 2 != 0)
        throw InvalidSpec("ficonn requires even n > 3, got n=" + std::to_string(n));
    } else {
      if (n <= 2)
        throw InvalidSpec(std::string(family_name(family)) + " requires n > 2, got n=" +
                          std::to_string(n));
    }
  }

  std::string name() const {
    return std::string(family_name(family)) + "(" + std::to_string(k) + "," +
           std::to_string(n) + ")";
  }
};

inline i64 checked_mul(i64 a, i64 b, const char* what) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Overflow(std::string("64-bit overflow computing ") + what);
  return r;
}

inline i64 checked_add(i64 a, i64 b, const char* what) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r))
    throw Overflow(std::string("64-bit overflow computing ") + what);
  return r;
}

// Server counts t_0..t_k, copy counts g_1..g_k and (FiConn) available-server
// counts b_1..b_k.  All label and link arithmetic derives from these.
struct LevelSizes {
  std::vector<i64> t;  // t[m], m = 0..k
  std::vector<i64> g;  // g[m-1] holds g_m, m = 1..k
  std::vector<i64> b;  // FiConn only: b[m-1] holds b_m

  int k() const { return static_cast<int>(t.size()) - 1; }
  i64 t_at(int m) const { return t[static_cast<size_t>(m)]; }
  i64 g_at(int m) const { return g[static_cast<size_t>(m - 1)]; }
  i64 b_at(int m) const { return b[static_cast<size_t>(m - 1)]; }
  i64 servers() const { return t.back(); }
};

inline LevelSizes compute_sizes(const NetworkSpec& spec) {
  spec.validate();
  LevelSizes s;
  s.t.push_back(spec.n);
  for (int m = 1; m <= spec.k; ++m) {
    i64 prev = s.t.back();
    i64 gm;
    if (spec.family == Family::FiConn) {
      i64 pow2m = i64{1} << m;
      if (prev % pow2m != 0)
        throw NonIntegralFiConn(spec.name() + ": t_" + std::to_string(m - 1) + "=" +
                                std::to_string(prev) + " not divisible by 2^" +
                                std::to_string(m));
      gm = prev / pow2m + 1;
      s.b.push_back(prev / (pow2m / 2));
    } else {
      gm = checked_add(prev, 1, "g_m");
    }
    s.g.push_back(gm);
    s.t.push_back(checked_mul(prev, gm, "t_m"));
  }
  return s;
}

// Table of analytic properties: no graph materialization involved.
struct StatsRecord {
  NetworkSpec spec;
  i64 servers = 0;
  i64 switches = 0;
  i64 physical_links = 0;
  i64 dim_route_bound = 0;  // 2^(k+1) - 1
  std::vector<i64> g;
  std::vector<i64> t;
};

inline StatsRecord stats(const NetworkSpec& spec) {
  LevelSizes s = compute_sizes(spec);
  StatsRecord r;
  r.spec = spec;
  r.servers = s.servers();
  r.switches = s.servers() / spec.n;
  // One switch link per server, then per level m: t_k/t_m groups of g_m
  // substructures, each pair joined by exactly one link.
  i64 links = s.servers();
  for (int m = 1; m <= spec.k; ++m) {
    i64 groups = s.servers() / s.t_at(m);
    i64 gm = s.g_at(m);
    i64 pairs = checked_mul(gm, gm - 1, "link pairs") / 2;
    links = checked_add(links, checked_mul(groups, pairs, "level links"), "|E|");
  }
  r.physical_links = links;
  r.dim_route_bound = (i64{1} << (spec.k + 1)) - 1;
  r.g = s.g;
  r.t = s.t;
  return r;
}

}  // namespace gcell
