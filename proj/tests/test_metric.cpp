#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sclab/families.hpp"
#include "sclab/metric.hpp"
#include "sclab/rng.hpp"

using namespace sclab;

namespace {

WeightedGraph path(std::size_t n) {
  GraphBuilder b;
  for (VertexId i = 0; i < n; ++i) b.add_vertex(i, 1.0);
  for (VertexId i = 0; i + 1 < n; ++i) b.add_edge(i, i + 1, 1.0);
  return b.build();
}

}  // namespace

TEST_CASE("degree metric hand values") {
  const auto g = path(5);
  const auto s = degree_metric(g, 1.0);
  CHECK(s.sigma(1, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(s.sigma(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));

  const auto e = path(2);
  CHECK(degree_metric(e, 1.0).sigma(0, 1) == doctest::Approx(1.0));
  CHECK(degree_metric(e, 0.3).sigma(0, 1) == doctest::Approx(0.3));
}

TEST_CASE("degree metric satisfies the weighted sum bound at every vertex") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomGraphSpec spec;
    spec.n = 30;
    spec.edge_prob = 0.2;
    spec.seed = seed;
    const auto g = random_graph(spec);
    const auto s = degree_metric(g, 1.0);
    for (const VertexId x : g.vertices()) {
      double sum = 0.0;
      for (const auto& n : g.neighbors(x)) sum += n.weight * std::pow(s.sigma(x, n.id), 2);
      CHECK(sum <= g.measure(x) * (1 + 1e-12));
    }
  }
}

TEST_CASE("path distances by hand") {
  GraphBuilder b;
  b.add_edge(0, 1, 1.0);
  b.add_edge(1, 2, 1.0);
  const auto g = b.build();
  const PathMetric d(g, table_lengths({{{0, 1}, 0.5}, {{1, 2}, 2.0}}, 1.0));
  CHECK(d.distance(0, 2) == doctest::Approx(2.5));
  CHECK(d.distance(1, 1) == 0.0);

  GraphBuilder t;
  t.add_edge(0, 1, 1.0);
  t.add_edge(1, 2, 1.0);
  t.add_edge(0, 2, 1.0);
  const auto tri = t.build();
  const PathMetric dt(tri, table_lengths({{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 3.0}}, 1.0));
  CHECK(dt.distance(0, 2) == doctest::Approx(2.0));
}

TEST_CASE("unreachable vertices give the marker") {
  GraphBuilder b;
  b.add_edge(0, 1, 1.0);
  b.add_edge(2, 3, 1.0);
  const auto g = b.build();
  const PathMetric d(g, unit_lengths());
  CHECK(d.distance(0, 3) == kUnreachable);
  CHECK(std::isinf(d.distance(3, 0)));
}

TEST_CASE("path metric agrees with Floyd-Warshall") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    RandomGraphSpec spec;
    spec.n = 30;
    spec.edge_prob = 0.15;
    spec.seed = seed;
    const auto g = random_graph(spec);
    SplitMix64 rng(seed, 3);
    std::map<std::pair<VertexId, VertexId>, double> table;
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (const VertexId x : g.vertices()) {
      for (const auto& n : g.neighbors(x)) {
        if (n.id > x) {
          const double l = 0.1 + 2.0 * rng.uniform_open();
          table[{x, n.id}] = l;
          edges.emplace_back(x, n.id, l);
        }
      }
    }
    const auto fw = oracle::floyd_warshall(g.vertices().size(), edges);
    const PathMetric d(g, table_lengths(table, 1.0));
    for (const VertexId x : g.vertices()) {
      for (const VertexId y : g.vertices()) {
        CHECK(d.distance(x, y) == doctest::Approx(fw[x][y]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("adaptedness verdicts on the path") {
  const auto g = path(7);
  const auto w = whole_graph_window(g);
  const PathMetric unit(g, unit_lengths());
  const auto rep = check_adapted(g, unit.as_function(), 1.0, w);
  CHECK(rep.verdict == Adaptedness::neither);
  CHECK(rep.max_sum == doctest::Approx(2.0));
  REQUIRE(rep.argmax.has_value());

  const double h = 1.0 / std::sqrt(2.0);
  const auto half = [h](VertexId, VertexId) { return h; };
  const auto r2 = check_adapted(g, half, 1.0, w);
  CHECK(r2.verdict == Adaptedness::adapted);
  CHECK(r2.max_sum == doctest::Approx(1.0));

  // truncated sums within 1 but an edge longer than c0
  const auto longer = [](VertexId x, VertexId y) { return std::min(x, y) == 3 ? 1.5 : 0.1; };
  CHECK(check_adapted(g, longer, 0.5, w).verdict == Adaptedness::weakly_adapted);
}

TEST_CASE("degree metric passes the adaptedness check on random graphs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomGraphSpec spec;
    spec.n = 2 + seed % 49;
    spec.edge_prob = 0.3;
    spec.seed = seed;
    const auto g = random_graph(spec);
    const PathMetric d(g, degree_metric(g, 1.0));
    CHECK(check_adapted(g, d.as_function(), 1.0, whole_graph_window(g)).verdict ==
          Adaptedness::adapted);
  }
}

TEST_CASE("truncating a weakly adapted metric makes it adapted") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomGraphSpec spec;
    spec.n = 30;
    spec.edge_prob = 0.2;
    spec.weight_lo = 0.05;
    spec.weight_hi = 1.0;
    spec.seed = seed;
    const auto g = random_graph(spec);
    const PathMetric d(g, degree_metric(g, 4.0));
    const auto t = truncate_by_jump_size(g, d.as_function(), 1.0);
    CHECK(check_adapted(t, d.as_function(), 1.0, whole_graph_window(t)).verdict ==
          Adaptedness::adapted);
  }
}

TEST_CASE("metric axioms on sampled triples") {
  RandomGraphSpec spec;
  spec.n = 40;
  spec.edge_prob = 0.15;
  spec.seed = 11;
  const auto g = random_graph(spec);
  const PathMetric d(g, degree_metric(g, 1.0));
  const auto& vs = g.vertices();
  SplitMix64 rng(1, 2);
  for (int k = 0; k < 1000; ++k) {
    const VertexId x = vs[rng() % vs.size()], y = vs[rng() % vs.size()], z = vs[rng() % vs.size()];
    CHECK(d.distance(x, y) == d.distance(y, x));
    CHECK(d.distance(x, z) <= d.distance(x, y) + d.distance(y, z) + 1e-12);
    if (x != y) CHECK(d.distance(x, y) > 0.0);
  }
}

TEST_CASE("dijkstra settles in distance order with id tie-break") {
  GraphBuilder b;
  b.add_edge(0, 3, 1.0);
  b.add_edge(0, 1, 1.0);
  b.add_edge(0, 2, 1.0);
  const auto g = b.build();
  const auto sp = dijkstra(g, unit_lengths(), 0, 5.0);
  CHECK(sp.order == std::vector<VertexId>{0, 1, 2, 3});
}
