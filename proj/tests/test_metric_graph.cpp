#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "sclab/families.hpp"
#include "sclab/metric_graph.hpp"
#include "sclab/rng.hpp"

using namespace sclab;

namespace {

struct Built {
  WeightedGraph g;
  GraphWindow w;
  MetricGraph X;
};

/// Metric graph with the given edge lengths as d.
Built build(const std::vector<std::tuple<VertexId, VertexId, double, double>>& edges,
            double c0 = 10.0) {
  GraphBuilder b;
  std::map<std::pair<VertexId, VertexId>, double> len;
  for (const auto& [x, y, om, l] : edges) {
    b.add_edge(x, y, om);
    len[{std::min(x, y), std::max(x, y)}] = l;
  }
  auto g = b.build();
  auto w = whole_graph_window(g);
  const auto d = [len](VertexId x, VertexId y) { return len.at({std::min(x, y), std::max(x, y)}); };
  auto X = build_metric_graph(g, d, c0, w);
  return {g, w, X};
}

}  // namespace

TEST_CASE("edge data of the metric graph") {
  const auto b = build({{0, 1, 2.0, 0.5}});
  REQUIRE(b.X.num_edges() == 1);
  const auto& e = b.X.edge(0);
  CHECK(e.length == 0.5);
  CHECK(e.p == doctest::Approx(1.0));
  CHECK(e.q == doctest::Approx(1.0));
  CHECK(e.measure() == doctest::Approx(0.5));
  CHECK(b.X.total_measure() == doctest::Approx(0.5));

  GraphBuilder lone;
  lone.add_vertex(0, 1.0);
  const auto g = lone.build();
  const auto X = build_metric_graph(g, [](VertexId, VertexId) { return 1.0; }, 1.0,
                                    whole_graph_window(g));
  CHECK(X.num_edges() == 0);
}

TEST_CASE("non-adapted metric is built with a warning") {
  const auto b = build({{0, 1, 1.0, 3.0}, {1, 2, 1.0, 3.0}}, 1.0);
  CHECK(b.X.num_edges() == 2);
  CHECK_FALSE(b.X.warnings.empty());
}

TEST_CASE("quotient distance") {
  const auto tri = build({{0, 1, 1.0, 1.0}, {1, 2, 1.0, 1.0}, {0, 2, 1.0, 3.0}});
  std::size_t long_edge = 0;
  for (std::size_t e = 0; e < tri.X.num_edges(); ++e) {
    if (tri.X.edge(e).length == 3.0) long_edge = e;
  }
  REQUIRE(tri.X.edge(long_edge).source == 0);
  CHECK(quotient_distance(tri.X, 0, {long_edge, 2.9}) == doctest::Approx(2.1));
  CHECK(quotient_distance(tri.X, 0, {long_edge, 0.0}) == 0.0);

  const auto one = build({{0, 1, 1.0, 2.0}});
  CHECK(quotient_distance(one.X, 0, {0, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("ball measure with partial edges") {
  GraphBuilder b;
  std::map<std::pair<VertexId, VertexId>, double> len;
  for (VertexId k = 1; k <= 3; ++k) b.add_edge(0, k, 2.0);
  const auto g = b.build();
  const auto X = build_metric_graph(g, [](VertexId, VertexId) { return 1.0; }, 10.0,
                                    whole_graph_window(g));
  CHECK(ball_measure(X, 0, 0.5) == doctest::Approx(3.0));
  CHECK(ball_measure(X, 0, 0.0) == 0.0);
  CHECK(ball_measure(X, 0, 5.0) == doctest::Approx(X.total_measure()));
}

TEST_CASE("ball measure agrees with sampled coverage") {
  RandomGraphSpec spec;
  spec.n = 15;
  spec.edge_prob = 0.3;
  spec.seed = 3;
  const auto g = random_graph(spec);
  const PathMetric d(g, degree_metric(g, 1.0));
  const auto X = build_metric_graph(g, d.as_function(), 1.0, whole_graph_window(g));
  const auto from = X.vertex_distances(0);
  for (const double r : {0.2, 0.7, 1.3, 2.0}) {
    double sampled = 0.0;
    const int n = 4000;
    for (std::size_t e = 0; e < X.num_edges(); ++e) {
      const auto& edge = X.edge(e);
      int inside = 0;
      for (int k = 0; k < n; ++k) {
        const double t = edge.length * (k + 0.5) / n;
        if (quotient_distance(X, from, {e, t}) <= r) ++inside;
      }
      sampled += edge.q * edge.length * inside / n;
    }
    CHECK(ball_measure(X, from, r) == doctest::Approx(sampled).epsilon(1e-3));
  }
}

TEST_CASE("comparison lemma on a triangle") {
  const auto tri = build({{0, 1, 1.0, 1.0}, {1, 2, 1.0, 1.0}, {0, 2, 1.0, 1.5}});
  const PathMetric d(tri.g, table_lengths({{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 1.5}}, 10.0));
  const auto rep = compare_lemma(tri.w, d.as_function(), tri.X, 0, {0.5, 1.0, 2.0});
  CHECK(rep.pairs_checked == 3);
  CHECK(rep.worst_distance_margin == doctest::Approx(0.0));
}

TEST_CASE("extension of a vertex function") {
  const auto e = build({{0, 1, 1.0, 2.0}});
  const VertexFunction zero{{0, 0.0}, {1, 0.0}};
  const auto v = woymp_extend(e.X, zero, -1.0);
  const auto& p = v.piece(0);
  CHECK(p.a == 0.5);
  CHECK(p.b == doctest::Approx(-1.0));
  CHECK(p.c == 0.0);
  const auto [d0, dl] = boundary_derivatives(e.X, v, 0);
  CHECK(d0 == doctest::Approx(-1.0));
  CHECK(dl == doctest::Approx(1.0));

  const auto lin = build({{0, 1, 1.0, 1.0}});
  const auto vl = woymp_extend(lin.X, {{0, 0.0}, {1, 1.0}}, 5.0);
  CHECK(vl.piece(0).a == 0.0);
  CHECK(vl.piece(0).b == doctest::Approx(1.0));
  const auto [s0, s1] = boundary_derivatives(lin.X, vl, 0);
  CHECK(s0 == s1);
}

TEST_CASE("extension keeps vertex values and peaks at endpoints") {
  SplitMix64 rng(5, 5);
  for (int k = 0; k < 200; ++k) {
    const double l = 0.05 + 2.0 * rng.uniform_open();
    const auto e = build({{0, 1, 1.0, l}});
    const VertexFunction u{{0, rng.uniform_open() * 2 - 1}, {1, rng.uniform_open() * 2 - 1}};
    const auto v = woymp_extend(e.X, u, -2.0);
    const auto back = restrict_to_vertices(e.X, v);
    CHECK(back(0) == doctest::Approx(u(0)));
    CHECK(back(1) == doctest::Approx(u(1)));
    double top = -1e300;
    for (int i = 0; i <= 200; ++i) top = std::max(top, v.piece(0)(l * i / 200.0));
    CHECK(top <= std::max(u(0), u(1)) + 1e-12);
    // Taylor bound of a one-sided difference for v'' = 1
    const double h = 1e-4;
    const auto [d0, dl] = boundary_derivatives(e.X, v, 0);
    CHECK(std::abs(d0 - (v.piece(0)(h) - v.piece(0)(0.0)) / h) <= h / 2 + 1e-10);
    (void)dl;
  }
}

TEST_CASE("energy form") {
  const auto e = build({{0, 1, 3.0, 0.5}});  // p = 1.5
  const auto f = interpolate(e.X, {{0, 1.0}, {1, 2.0}});  // slope 2
  CHECK(energy_form(e.X, f, f) == doctest::Approx(1.5 * 4.0 * 0.5));
  const auto c = interpolate(e.X, {{0, 1.0}, {1, 1.0}});
  CHECK(energy_form(e.X, c, f) == 0.0);
}

TEST_CASE("integration by parts") {
  const auto star = build({{0, 1, 1.0, 0.5}, {0, 2, 2.0, 0.7}, {0, 3, 0.5, 0.3}, {1, 2, 1.0, 0.4}});
  const VertexFunction u{{0, 0.2}, {1, -0.3}, {2, 0.9}, {3, 0.0}};
  const auto v = woymp_extend(star.X, u, 0.1);
  const auto t = ibp_check(star.X, v, hat_function(star.X, 0));
  CHECK(std::abs(t.residual) <= 1e-12);
  const auto zero = ibp_check(star.X, v, interpolate(star.X, {}));
  CHECK(zero.energy == 0.0);
  CHECK(zero.bulk == 0.0);
  CHECK(zero.boundary == 0.0);
  const auto lin = interpolate(star.X, u);
  const auto tl = ibp_check(star.X, lin, hat_function(star.X, 2));
  CHECK(tl.bulk == 0.0);
  CHECK(tl.energy == doctest::Approx(tl.boundary));
}

TEST_CASE("inequality chain on a three-vertex window") {
  // path 0-1-2 inside the half line: center 1 interior, mu(1) = 1
  GraphBuilder b;
  for (VertexId i = 0; i < 4; ++i) b.add_vertex(i, 1.0);
  b.add_edge(0, 1, 1.0);
  b.add_edge(1, 2, 1.0);
  b.add_edge(2, 3, 1.0);
  b.add_vertex(5, 1.0);
  b.add_edge(0, 5, 1.0);
  const auto g = b.build();
  const auto w = make_window(g, {0, 1, 2});
  const double h = 1.0 / std::sqrt(2.0);
  const auto d = [h](VertexId, VertexId) { return h; };
  const auto X = build_metric_graph(g, d, 1.0, w);
  // Delta u(1) = (u1 - u0) + (u1 - u2) = -1.5
  const VertexFunction u{{0, 0.0}, {1, -0.75}, {2, 0.0}};
  const auto rep = woymp_inequality_check(g, w, X, u, 1.0);
  REQUIRE(rep.status == InequalityStatus::holds);
  REQUIRE(rep.centers == std::vector<VertexId>{1});
  // closed form: eps(v, phi) = -(1/2) sum omega d^2 + sum omega (u1 - uy) = -1/2 - 1.5 (no bulk
  // on the hat: v'' = 1 gives -sum p int phi = -sum omega d^2 / 2)
  const double bulk = -2.0 * h * h / 2.0;
  const double vertex = -1.5 + 0.5 * 2.0 * h * h;
  const double eps_hat = bulk + vertex;
  const double integral = 2.0 * h * h / 2.0;
  CHECK(rep.margins[0] == doctest::Approx(-integral - eps_hat));

  const VertexFunction flat{{0, 1.0}, {1, 1.0}, {2, 1.0}};
  CHECK(woymp_inequality_check(g, w, X, flat, 1.0).status == InequalityStatus::inapplicable);
}

TEST_CASE("vertex-term regrouping") {
  const auto tri = build({{0, 1, 1.0, 0.6}, {1, 2, 2.0, 0.3}, {0, 2, 0.5, 0.8}, {2, 3, 1.0, 0.5}});
  const VertexFunction u{{0, 1.0}, {1, 0.4}, {2, 0.9}, {3, -1.0}};
  const VertexFunction phi{{0, 0.7}, {2, -0.2}};
  const auto id = vertex_term_identity(tri.X, u, 0.5, phi);
  CHECK(std::abs(id.residual) <= 1e-12);
  CHECK_THROWS_AS(vertex_term_identity(tri.X, u, 0.5, {{1, 1.0}}), std::invalid_argument);
}

TEST_CASE("interpolation identities") {
  const auto e = build({{0, 1, 1.0, 1.0}});
  const auto wh = interpolate(e.X, {{0, 0.0}, {1, 1.0}});
  CHECK(energy_form(e.X, wh, wh) == doctest::Approx(1.0));
  const auto rep = interpolation_bounds_check(e.X, {{0, 0.0}, {1, 1.0}});
  CHECK(rep.max_energy_residual <= 1e-15);
  CHECK(rep.max_l2_residual <= 1e-15);
  CHECK(rep.max_l1_residual <= 1e-15);
  REQUIRE(rep.global_l1_residual.has_value());
  CHECK(*rep.global_l1_residual <= 1e-15);
  // direct integral of t^2 is 1/3
  const double direct = oracle::simpson([&](double t) { return wh.piece(0)(t) * wh.piece(0)(t); }, 0, 1);
  CHECK(direct == doctest::Approx(1.0 / 3.0));

  const auto flat = interpolate(e.X, {{0, 1.0}, {1, 1.0}});
  CHECK(oracle::simpson([&](double t) { return flat.piece(0)(t) * flat.piece(0)(t); }, 0, 1) ==
        doctest::Approx(1.0));

  const auto back = restrict_to_vertices(e.X, interpolate(e.X, {{0, 0.3}, {1, -2.0}}));
  CHECK(back(0) == 0.3);
  CHECK(back(1) == -2.0);

  const auto sign = interpolation_bounds_check(e.X, {{0, -1.0}, {1, 1.0}});
  CHECK(sign.sign_changing_edges == 1);
  CHECK_FALSE(sign.global_l1_residual.has_value());
}

TEST_CASE("one third formula stays below the one half formula") {
  SplitMix64 rng(1, 1);
  for (int k = 0; k < 1000; ++k) {
    const double a = 4 * rng.uniform_open() - 2, b = 4 * rng.uniform_open() - 2;
    CHECK((a * a + a * b + b * b) / 3.0 <= (a * a + b * b) / 2.0 + 1e-15);
  }
}

TEST_CASE("Sobolev bounds") {
  CHECK(vertex_trace_constant(1.0) == doctest::Approx(2.0 / std::tanh(1.0)));
  const MetricGraph empty;
  const auto one = sobolev_check(empty, 1.0, {{{0, 0, 1}, 1.0}}, {});
  CHECK(one.worst_interval_margin == doctest::Approx(1.0 / std::tanh(1.0) - 1.0));
  const auto lin = sobolev_check(empty, 1.0, {{{0, 1, 0}, 1.0}}, {});
  CHECK(lin.worst_interval_margin == doctest::Approx((1.0 / 3.0 + 1.0) / std::tanh(1.0) - 1.0));

  SplitMix64 rng(9, 9);
  std::vector<IntervalSample> samples;
  for (int k = 0; k < 1000; ++k) {
    samples.push_back({{6 * rng.uniform_open() - 3, 6 * rng.uniform_open() - 3,
                        6 * rng.uniform_open() - 3},
                       3.0 * rng.uniform_open()});
  }
  CHECK(sobolev_check(empty, 1.0, samples, {}).interval_violations == 0);
}

TEST_CASE("sup of a quadratic") {
  CHECK(sup_abs({1, -2, 0}, 3.0) == doctest::Approx(3.0));
  CHECK(sup_abs({1, -2, 0.5}, 2.0) == doctest::Approx(0.5));
  CHECK(sup_abs({-1, 2, 0}, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("orientation does not change the forms") {
  RandomGraphSpec spec;
  spec.n = 20;
  spec.edge_prob = 0.3;
  spec.seed = 12;
  const auto g = random_graph(spec);
  const PathMetric d(g, degree_metric(g, 1.0));
  const auto w = whole_graph_window(g);
  const auto X1 = build_metric_graph(g, d.as_function(), 1.0, w, Orientation::smaller_id_first);
  const auto X2 = build_metric_graph(g, d.as_function(), 1.0, w, Orientation::larger_id_first);
  SplitMix64 rng(2, 2);
  VertexFunction u, f;
  for (const VertexId x : w.vertices) {
    u.set(x, rng.uniform_open());
    f.set(x, rng.uniform_open());
  }
  const auto v1 = woymp_extend(X1, u, 0.5), v2 = woymp_extend(X2, u, 0.5);
  const auto p1 = interpolate(X1, f), p2 = interpolate(X2, f);
  CHECK(energy_form(X1, v1, p1) == doctest::Approx(energy_form(X2, v2, p2)).epsilon(1e-12));
  CHECK(measure_integral(X1, v1) == doctest::Approx(measure_integral(X2, v2)).epsilon(1e-12));
  for (const VertexId x : w.vertices) {
    CHECK(ibp_check(X1, v1, hat_function(X1, x)).energy ==
          doctest::Approx(ibp_check(X2, v2, hat_function(X2, x)).energy).epsilon(1e-12));
  }
}

TEST_CASE("text formats") {
  const auto e = build({{0, 1, 2.0, 0.5}, {1, 2, 1.0, 0.25}});
  std::ostringstream mg;
  write_metric_graph(mg, e.X);
  CHECK(mg.str() == "medge 0 1 0.5 1 1\nmedge 1 2 0.25 0.25 0.25\n");

  const auto v = woymp_extend(e.X, {{0, 0.0}, {1, 1.0}, {2, 0.5}}, 0.7);
  std::ostringstream out;
  write_piecewise(out, v);
  std::istringstream in(out.str());
  const auto back = read_piecewise(in, e.X);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(back.piece(k).a == v.piece(k).a);
    CHECK(back.piece(k).b == v.piece(k).b);
    CHECK(back.piece(k).c == v.piece(k).c);
  }
  std::istringstream broken("poly 0 0.5 0 0\npoly 1 0.3 0 0\n");
  CHECK_THROWS(read_piecewise(broken, e.X));
}
