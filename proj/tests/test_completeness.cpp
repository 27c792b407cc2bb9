#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "oracles.hpp"
#include "sclab/completeness.hpp"
#include "sclab/families.hpp"
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

TEST_CASE("resolvent on a two-vertex window of the half line") {
  const auto nat = birth_death(0.0);
  const auto w = make_window(nat, {0, 1});
  const auto sol = dirichlet_resolvent(w, 1.0);
  CHECK(sol.u(0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(sol.u(1) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(sol.residual <= 1e-12);

  const auto bigger = dirichlet_resolvent(make_window(nat, {0, 1, 2}), 1.0);
  CHECK(bigger.u(0) >= 0.8);
}

TEST_CASE("resolvent on a whole finite graph is identically one") {
  RandomGraphSpec spec;
  spec.n = 30;
  spec.seed = 4;
  const auto g = random_graph(spec);
  const auto sol = dirichlet_resolvent(whole_graph_window(g), 0.7);
  for (const double v : sol.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resolvent matches dense elimination on random windows") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    RandomGraphSpec spec;
    spec.n = 60;
    spec.edge_prob = 0.06;
    spec.seed = seed;
    const auto g = random_graph(spec);
    const auto w = ball_window(g, unit_lengths(), 0, 2);
    const double lambda = 0.2 + 0.3 * double(seed % 5);
    const auto sol = dirichlet_resolvent(w, lambda);
    const auto ref = oracle::resolvent(g, w.vertices, lambda);
    for (const auto& [x, v] : ref) CHECK(sol.u(x) == doctest::Approx(v).epsilon(1e-10));
  }
}

TEST_CASE("resolvent on a steep birth-death window stays accurate") {
  const auto g = birth_death(3.0);
  std::vector<VertexId> verts;
  for (VertexId i = 0; i <= 40; ++i) verts.push_back(i);
  const auto sol = dirichlet_resolvent(make_window(g, verts), 1.0);
  const auto ref = oracle::resolvent(g, verts, 1.0);
  for (const auto& [x, v] : ref) CHECK(sol.u(x) == doctest::Approx(v).epsilon(1e-9));
  CHECK(sol.residual <= 1e-12);
}

TEST_CASE("deficiency profile on a finite graph vanishes beyond the diameter") {
  const auto g = path(10);
  const auto res = incompleteness_defect(g, unit_lengths(), 0, 1.0, {20, 30});
  for (const double d : res.profile.deficiency) CHECK(std::abs(d) <= 1e-12);
  CHECK(res.verdict.kind == VerdictKind::complete_up_to_evidence);
}

TEST_CASE("birth-death dichotomy through the resolvent") {
  const auto steep = incompleteness_defect(birth_death(3.0), unit_lengths(), 0, 1.0, {100, 200, 400});
  CHECK(steep.verdict.kind == VerdictKind::incomplete);
  CHECK(steep.profile.deficiency.back() > 0.25);

  const auto flat = incompleteness_defect(birth_death(1.0), unit_lengths(), 0, 1.0, {100, 200, 400});
  CHECK(flat.verdict.kind == VerdictKind::complete_up_to_evidence);
  CHECK(flat.profile.deficiency.back() < 1e-2);
}

TEST_CASE("decision rule") {
  CHECK(decide({10, 20}, {0.3, 0.3005}).kind == VerdictKind::incomplete);
  CHECK(decide({10, 20}, {0.3, 0.2}).kind == VerdictKind::complete_up_to_evidence);
  CHECK(decide({10, 20}, {0.004, 0.002}).kind == VerdictKind::complete_up_to_evidence);
  const auto one = decide({10}, {0.5});
  CHECK(one.kind == VerdictKind::complete_up_to_evidence);
  CHECK(std::isnan(one.last_change));
  // 1/R extrapolation: d(R) = 0.2 + 1/R
  const auto v = decide({100, 200}, {0.21, 0.205});
  CHECK(v.extrapolated == doctest::Approx(0.2));
}

TEST_CASE("weak Omori-Yau certificates") {
  const auto g = path(3);
  const auto w = whole_graph_window(g);
  const VertexFunction c{{0, 1.0}, {1, 1.0}, {2, 1.0}};
  CHECK(woymp_check(g, {c, 0.3, 1.0}, w).status == WoympStatus::not_violating);

  const VertexFunction dec{{0, 2.0}, {1, 1.0}, {2, 0.0}};
  const auto r = woymp_check(g, {dec, 0.5, 2.0}, w);
  CHECK(r.status == WoympStatus::not_violating);
  CHECK(r.witnesses == std::vector<VertexId>{0});
  CHECK(r.max_laplacian == doctest::Approx(1.0));

  const VertexFunction bump{{0, 0.0}, {1, 1.0}, {2, 0.0}};
  const auto b = woymp_check(g, {bump, 0.5, 1.0}, w);
  CHECK(b.status == WoympStatus::not_violating);
  CHECK(b.max_laplacian == doctest::Approx(2.0));

  // a window whose superlevel set only touches boundary vertices
  const auto nat = birth_death(0.0);
  const auto win = make_window(nat, {0, 1});
  const VertexFunction up{{0, 0.0}, {1, 1.0}, {2, 0.0}};
  CHECK(woymp_check(nat, {up, 0.5, 1.0}, win).status == WoympStatus::vacuous);
}

TEST_CASE("violating certificate survives a smaller measure") {
  // u(0) = -1, u(1) = 0 on the window {0, 1} of the half line with omega = 2:
  // Delta u(0) = 2 * (-1 - 0) / mu(0) = -2
  GraphBuilder b;
  b.add_vertex(0, 1.0);
  b.add_vertex(1, 1.0);
  b.add_vertex(2, 1.0);
  b.add_edge(0, 1, 2.0);
  b.add_edge(1, 2, 2.0);
  const auto g = b.build();
  const auto w = make_window(g, {0, 1});
  const VertexFunction u{{0, -0.5}, {1, 0.0}, {2, 0.0}};
  const WoympCertificate cert{u, 1.0, 0.0};
  REQUIRE(woymp_check(g, cert, w).status == WoympStatus::violating);
  const auto inner = std::make_shared<WeightedGraph>(g);
  const auto smaller = g.with_measure([inner](VertexId x) { return 0.4 * inner->measure(x); });
  CHECK(woymp_check(smaller, cert, make_window(smaller, {0, 1})).status == WoympStatus::violating);
}

TEST_CASE("special measure sits below mu for the degree metric") {
  RandomGraphSpec spec;
  spec.n = 40;
  spec.seed = 8;
  const auto g = random_graph(spec);
  const PathMetric d(g, degree_metric(g, 1.0));
  const auto nu = special_measure(g, d.as_function());
  for (const VertexId x : g.vertices()) CHECK(nu(x) <= g.measure(x) * (1 + 1e-12));
}

TEST_CASE("holding time mean and the forced jump") {
  const auto g = path(3);  // Deg(1) = 2
  ChainOptions opt;
  opt.jump_cap = 1;
  opt.horizon = 1e300;
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) sum += simulate_chain(g, 1, opt, 42, i).times[1];
  CHECK(std::abs(sum / n - 0.5) <= 3.0 * 0.5 / 100.0);

  GraphBuilder two;
  two.add_edge(0, 1, 3.0);
  const auto t = two.build();
  ChainOptions many;
  many.jump_cap = 50;
  many.horizon = 1e300;
  const auto tr = simulate_chain(t, 0, many, 7);
  for (std::size_t k = 0; k < tr.vertices.size(); ++k) CHECK(tr.vertices[k] == k % 2);
}

TEST_CASE("isolated vertex waits until the horizon") {
  GraphBuilder b;
  b.add_vertex(0, 1.0);
  const auto tr = simulate_chain(b.build(), 0, {}, 1);
  CHECK(tr.status == TerminalStatus::horizon_reached);
  CHECK(tr.jumps == 0);
  CHECK(tr.final_time == 10.0);
}

TEST_CASE("radius cap stops the chain") {
  ChainOptions opt;
  opt.radius_cap = 3.0;
  opt.lengths = unit_lengths();
  opt.horizon = 1e9;
  const auto tr = simulate_chain(birth_death(1.0), 0, opt, 3);
  CHECK(tr.status == TerminalStatus::radius_escape);
  CHECK(tr.final_vertex == 4);

  ChainOptions bad;
  bad.radius_cap = 3.0;
  CHECK_THROWS_AS(simulate_chain(birth_death(1.0), 0, bad, 3), std::invalid_argument);
}

TEST_CASE("ensembles are reproducible and independent of the worker count") {
  ChainOptions opt;
  opt.jump_cap = 2000;
  const auto g = birth_death(3.0);
  setenv("SCLAB_THREADS", "1", 1);
  const auto a = run_ensemble(g, 0, opt, 42, 40);
  setenv("SCLAB_THREADS", "3", 1);
  const auto b = run_ensemble(g, 0, opt, 42, 40);
  unsetenv("SCLAB_THREADS");
  CHECK(a.jumps == b.jumps);
  CHECK(a.final_times == b.final_times);
  CHECK(a.jump_cap == b.jump_cap);
}

TEST_CASE("explosive and conservative chains under the same caps") {
  ChainOptions opt;
  opt.jump_cap = 10'000;
  const auto fast = run_ensemble(birth_death(3.0), 0, opt, 42, 100);
  CHECK(fast.fraction_jump_cap() >= 0.9);
  const auto slow = run_ensemble(birth_death(1.0), 0, opt, 42, 100);
  CHECK(slow.fraction_jump_cap() <= 0.01);
}

TEST_CASE("cut-off probe") {
  CHECK(cutoff_value(0.0, 4.0) == 1.0);
  CHECK(cutoff_value(6.0, 4.0) == doctest::Approx(0.5));
  CHECK(cutoff_value(9.0, 4.0) == 0.0);
  CHECK(cutoff_value(kUnreachable, 4.0) == 0.0);

  const auto g = birth_death(1.0);
  const PathMetric d(g, unit_lengths());
  const auto probe = fot_probe(g, 0, {4, 8, 16, 32}, {{0, 1.0}}, d.as_function());
  for (std::size_t k = 1; k < probe.energies.size(); ++k) {
    CHECK(std::abs(probe.energies[k]) <= std::abs(probe.energies[k - 1]));
  }
  CHECK(probe.energies.back() == 0.0);
  CHECK(probe.trend == FotTrend::vanishing);

  // w = 1 at vertex 3, where v_2 = 1/2: edges (2,3) and (3,4) contribute
  const auto p2 = fot_probe(g, 0, {2, 4, 8}, {{3, 1.0}}, d.as_function());
  const double expected = 3.0 * (1.0 - 0.5) * (0.0 - 1.0) + 4.0 * (0.5 - 0.0) * (1.0 - 0.0);
  CHECK(p2.energies[0] == doctest::Approx(expected));
  CHECK(p2.energies[2] == 0.0);
}

TEST_CASE("summability oracle") {
  const auto one = [](std::uint64_t) { return 1.0; };
  auto power = [](double a) { return [a](std::uint64_t n) { return std::pow(double(n + 1), a); }; };
  CHECK(nearest_neighbor_oracle(one, power(3.0)).decision == OracleDecision::incomplete);
  CHECK(nearest_neighbor_oracle(one, power(2.0)).decision == OracleDecision::complete);
  CHECK(nearest_neighbor_oracle(one, power(1.0)).decision == OracleDecision::complete);
  const auto r = nearest_neighbor_oracle(one, power(3.0));
  CHECK(r.partial_sum == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-5));
  CHECK(nearest_neighbor_oracle(one, power(2.05), 100'000).decision == OracleDecision::indeterminate);
  CHECK_THROWS_AS(nearest_neighbor_oracle(one, power(3.0), 10), std::invalid_argument);
}
