#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace gcell;

namespace {

const std::vector<NetworkSpec> kSmallSpecs = {
    {Family::DCell, 2, 3}, {Family::BetaDCell, 2, 3}, {Family::FiConn, 2, 4}};

}  // namespace

TEST_CASE("hand-checked dimensional route") {
  NetworkSpec spec{Family::DCell, 1, 3};
  LevelSizes sizes = compute_sizes(spec);
  Route r = dim_route(spec, sizes, 1, 5);
  CHECK(r.hops == std::vector<i64>{1, 0, 3, 5});
  CHECK(r.length() == 3);
  CHECK(r.kind == RouteKind::Dimensional);
  Route self = dim_route(spec, sizes, 7, 7);
  CHECK(self.hops == std::vector<i64>{7});
  CHECK(self.length() == 0);
}

TEST_CASE("dimensional routes are valid and bounded on all pairs") {
  for (const auto& spec : kSmallSpecs) {
    INFO(spec.name());
    Topology topo = build_graph(spec);
    const LevelSizes& sizes = topo.sizes();
    i64 bound = (i64{1} << (spec.k + 1)) - 1;
    for (i64 s = 0; s < sizes.servers(); ++s)
      for (i64 d = 0; d < sizes.servers(); ++d) {
        Route r = dim_route(spec, sizes, s, d);
        REQUIRE(r.hops.front() == s);
        REQUIRE(r.hops.back() == d);
        REQUIRE(route_is_valid(topo, r).ok);
        REQUIRE(r.length() <= bound);
        REQUIRE(dim_len(spec, sizes, s, d) == r.length());
      }
  }
}

TEST_CASE("switch-flag search matches a plain breadth-first search") {
  for (const auto& spec : kSmallSpecs) {
    INFO(spec.name());
    Topology topo = build_graph(spec);
    BfsRunner runner(topo);
    for (i64 s = 0; s < topo.server_count(); ++s)
      for (i64 d = 0; d < topo.server_count(); ++d) {
        Route r = runner.route(s, d);
        REQUIRE(route_is_valid(topo, r).ok);
        REQUIRE(r.hops.front() == s);
        REQUIRE(r.hops.back() == d);
        REQUIRE(r.length() == testref::reference_bfs_len(topo, s, d));
      }
  }
}

TEST_CASE("shortest never exceeds dimensional") {
  for (const auto& spec : kSmallSpecs) {
    Topology topo = build_graph(spec);
    const LevelSizes& sizes = topo.sizes();
    BfsRunner runner(topo);
    for (i64 s = 0; s < topo.server_count(); ++s)
      for (i64 d = 0; d < topo.server_count(); ++d)
        REQUIRE(runner.route(s, d).length() <= dim_len(spec, sizes, s, d));
  }
}

TEST_CASE("search is deterministic across runners") {
  Topology topo = build_graph(NetworkSpec{Family::BetaDCell, 2, 3});
  BfsRunner r1(topo), r2(topo);
  SplitMix64 rng(7);
  for (int i = 0; i < 500; ++i) {
    i64 s = static_cast<i64>(rng.below(static_cast<u64>(topo.server_count())));
    i64 d = static_cast<i64>(rng.below(static_cast<u64>(topo.server_count())));
    CHECK(r1.route(s, d).hops == r2.route(s, d).hops);
    CHECK(r1.route(s, d).hops == r1.route(s, d).hops);
  }
}

TEST_CASE("decision level") {
  LevelSizes sizes = compute_sizes(NetworkSpec{Family::DCell, 2, 3});
  // t = [3, 12, 156]
  CHECK(decision_level(sizes, 0, 2) == 0);
  CHECK(decision_level(sizes, 0, 3) == 1);
  CHECK(decision_level(sizes, 0, 11) == 1);
  CHECK(decision_level(sizes, 0, 12) == 2);
  CHECK(decision_level(sizes, 155, 0) == 2);
  for (i64 s : {i64{0}, i64{5}, i64{100}})
    for (i64 d : {i64{1}, i64{17}, i64{155}})
      if (s != d) CHECK(decision_level(sizes, s, d) == decision_level(sizes, d, s));
}

TEST_CASE("route order counts substructure runs") {
  NetworkSpec spec{Family::DCell, 2, 3};
  LevelSizes sizes = compute_sizes(spec);
  for (i64 s : {i64{0}, i64{7}, i64{40}})
    for (i64 d : {i64{13}, i64{100}, i64{155}}) {
      if (s / sizes.t_at(1) == d / sizes.t_at(1)) continue;
      Route r = dim_route(spec, sizes, s, d);
      // One crossing at the top level: the route visits exactly two copies.
      CHECK(route_order(spec, sizes, r, 2) == 2);
    }
  Route inner = dim_route(spec, sizes, 0, 11);
  CHECK(route_order(spec, sizes, inner, 1) == 2);
  CHECK_THROWS_AS(route_order(spec, sizes, inner, 0), LevelOutOfRange);
  CHECK_THROWS_AS(route_order(spec, sizes, inner, 3), LevelOutOfRange);
  Route cross = dim_route(spec, sizes, 0, 155);
  CHECK_THROWS_AS(route_order(spec, sizes, cross, 1), PreconditionViolated);
}

TEST_CASE("route checking rejects malformed routes") {
  Topology topo = build_graph(NetworkSpec{Family::DCell, 1, 3});
  Route ok = dim_route(topo.spec(), topo.sizes(), 1, 5);
  CHECK(route_is_valid(topo, ok).ok);
  Route empty;
  CHECK_FALSE(route_is_valid(topo, empty).ok);
  Route repeat{{1, 0, 1}, RouteKind::Shortest};
  CHECK_FALSE(route_is_valid(topo, repeat).ok);
  Route gap{{1, 7}, RouteKind::Shortest};
  CHECK_FALSE(route_is_valid(topo, gap).ok);
}

TEST_CASE("uid validation on routing entry points") {
  NetworkSpec spec{Family::DCell, 1, 3};
  LevelSizes sizes = compute_sizes(spec);
  CHECK_THROWS_AS(dim_route(spec, sizes, -1, 5), UidOutOfRange);
  CHECK_THROWS_AS(dim_route(spec, sizes, 0, 12), UidOutOfRange);
  CHECK_THROWS_AS(dim_len(spec, sizes, 12, 0), UidOutOfRange);
}
