#include <catch2/catch_amalgamated.hpp>

#include "gcell/spec.hpp"

using namespace gcell;

namespace {

NetworkSpec S(Family f, int k, i64 n) { return NetworkSpec{f, k, n}; }

}  // namespace

TEST_CASE("size recurrences on small instances") {
  auto d13 = compute_sizes(S(Family::DCell, 1, 3));
  CHECK(d13.t == std::vector<i64>{3, 12});
  CHECK(d13.g == std::vector<i64>{4});

  auto d23 = compute_sizes(S(Family::DCell, 2, 3));
  CHECK(d23.t == std::vector<i64>{3, 12, 156});
  CHECK(d23.g == std::vector<i64>{4, 13});

  // Same copy counts as DCell: the recurrence differs only in how links are placed.
  auto b23 = compute_sizes(S(Family::BetaDCell, 2, 3));
  CHECK(b23.t == d23.t);
  CHECK(b23.g == d23.g);

  auto f24 = compute_sizes(S(Family::FiConn, 2, 4));
  CHECK(f24.t == std::vector<i64>{4, 12, 48});
  CHECK(f24.g == std::vector<i64>{3, 4});
  CHECK(f24.b == std::vector<i64>{4, 6});

  auto d33 = compute_sizes(S(Family::DCell, 3, 3));
  CHECK(d33.t == std::vector<i64>{3, 12, 156, 24492});
  CHECK(d33.g == std::vector<i64>{4, 13, 157});
}

TEST_CASE("published property table") {
  struct Row {
    NetworkSpec spec;
    i64 servers, switches, links, bound;
    std::vector<i64> g;
  };
  const std::vector<Row> rows = {
      {S(Family::FiConn, 2, 36), 117648, 3268, 161766, 7, {19, 172}},
      {S(Family::FiConn, 2, 48), 361200, 7525, 496650, 7, {25, 301}},
      {S(Family::FiConn, 3, 10), 116160, 11616, 166980, 15, {6, 16, 121}},
      {S(Family::FiConn, 3, 16), 3553776, 222111, 5108553, 15, {9, 37, 667}},
      {S(Family::FiConn, 4, 6), 857472, 142912, 1259412, 31, {4, 7, 22, 232}},
      {S(Family::FiConn, 4, 8), 37970240, 4746280, 55768790, 31, {5, 11, 56, 1541}},
      {S(Family::DCell, 2, 18), 117306, 6517, 234612, 7, {19, 343}},
      {S(Family::DCell, 2, 43), 3581556, 83292, 7163112, 7, {44, 1893}},
      {S(Family::DCell, 3, 3), 24492, 8164, 61230, 15, {4, 13, 157}},
      {S(Family::DCell, 3, 6), 3263442, 543907, 8158605, 15, {7, 43, 1807}},
  };
  for (const auto& row : rows) {
    INFO(row.spec.name());
    StatsRecord st = stats(row.spec);
    CHECK(st.servers == row.servers);
    CHECK(st.switches == row.switches);
    CHECK(st.physical_links == row.links);
    CHECK(st.dim_route_bound == row.bound);
    CHECK(st.g == row.g);
    CHECK(st.t.back() == row.servers);
  }
  // A beta_dcell spec has the same counts as the dcell spec it rewires.
  StatsRecord beta = stats(S(Family::BetaDCell, 2, 18));
  StatsRecord plain = stats(S(Family::DCell, 2, 18));
  CHECK(beta.servers == plain.servers);
  CHECK(beta.physical_links == plain.physical_links);
}

TEST_CASE("link count equals the direct-link sum") {
  // |E| = t_k (switch links) + sum over levels of group_count * C(g_m, 2).
  for (auto spec : {S(Family::DCell, 3, 3), S(Family::BetaDCell, 3, 3),
                    S(Family::FiConn, 3, 10)}) {
    LevelSizes s = compute_sizes(spec);
    i64 links = s.servers();
    for (int m = 1; m <= spec.k; ++m)
      links += (s.servers() / s.t_at(m)) * (s.g_at(m) * (s.g_at(m) - 1) / 2);
    CHECK(stats(spec).physical_links == links);
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(compute_sizes(S(Family::DCell, 2, 2)), InvalidSpec);
  CHECK_THROWS_AS(compute_sizes(S(Family::BetaDCell, 2, 1)), InvalidSpec);
  CHECK_THROWS_AS(compute_sizes(S(Family::FiConn, 2, 7)), InvalidSpec);
  CHECK_THROWS_AS(compute_sizes(S(Family::FiConn, 2, 2)), InvalidSpec);
  CHECK_THROWS_AS(compute_sizes(S(Family::DCell, -1, 3)), InvalidSpec);
  CHECK_NOTHROW(compute_sizes(S(Family::DCell, 0, 3)));
  CHECK_NOTHROW(compute_sizes(S(Family::FiConn, 4, 8)));
}

TEST_CASE("overflow is reported, not wrapped") {
  CHECK_THROWS_AS(compute_sizes(S(Family::DCell, 5, 10)), Overflow);
  CHECK_THROWS_AS(stats(S(Family::DCell, 5, 10)), Overflow);
}

TEST_CASE("degenerate depth zero") {
  LevelSizes s = compute_sizes(S(Family::DCell, 0, 5));
  CHECK(s.servers() == 5);
  CHECK(s.g.empty());
  StatsRecord st = stats(S(Family::DCell, 0, 5));
  CHECK(st.switches == 1);
  CHECK(st.physical_links == 5);
  CHECK(st.dim_route_bound == 1);
}
