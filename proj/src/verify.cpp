#include "sclab/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include "sclab/completeness.hpp"
#include "sclab/families.hpp"
#include "sclab/growth.hpp"
#include "sclab/rng.hpp"
#include "sclab/solver.hpp"

namespace sclab {

namespace {

double uniform(SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform_open(); }

RandomGraphSpec random_spec(SplitMix64& rng, std::size_t n_min, std::size_t n_max) {
  RandomGraphSpec spec;
  spec.n = n_min + rng() % (n_max - n_min + 1);
  spec.edge_prob = uniform(rng, 0.1, 0.5);
  spec.seed = rng();
  return spec;
}

/// Path metric kept alive by the returned closure.
DistanceFn shared_path_metric(const WeightedGraph& g, const EdgeLengths& lengths) {
  auto pm = std::make_shared<PathMetric>(g, lengths);
  return [pm](VertexId x, VertexId y) { return pm->distance(x, y); };
}

EdgeLengths random_table_lengths(const WeightedGraph& g, SplitMix64& rng, double lo, double hi,
                                 double c0) {
  std::map<std::pair<VertexId, VertexId>, double> table;
  for (const VertexId x : g.vertices()) {
    for (const auto& n : g.neighbors(x)) {
      if (n.id > x) table[{x, n.id}] = uniform(rng, lo, hi);
    }
  }
  return table_lengths(std::move(table), c0);
}

/// Tracks the worst value of a residual (or margin) and counts cases beyond tolerance.
class Tally {
 public:
  Tally(std::string name, std::string module, double tolerance, bool margin = false) {
    r_.name = std::move(name);
    r_.module = std::move(module);
    r_.tolerance = tolerance;
    r_.measure = margin ? "min_margin" : "max_residual";
  }

  void residual(double value) {
    if (first_ || value > r_.worst || std::isnan(value)) r_.worst = value;
    first_ = false;
    ++r_.cases;
    if (!(value <= r_.tolerance)) ++r_.failures;
  }

  void margin(double value) {
    if (first_ || value < r_.worst || std::isnan(value)) r_.worst = value;
    first_ = false;
    ++r_.cases;
    if (!(value >= -r_.tolerance)) ++r_.failures;
  }

  void check(bool ok) {
    ++r_.cases;
    if (!ok) ++r_.failures;
  }

  void note(std::string s) { r_.note = std::move(s); }
  SuiteResult result() const { return r_; }

 private:
  SuiteResult r_;
  bool first_ = true;
};

/// Solves Sum_y omega (u(x) - u(y)) = rhs(x) on interior vertices with u = 0 on the rest.
VertexFunction dirichlet_solve(const GraphWindow& w, const std::vector<double>& rhs) {
  std::vector<std::size_t> slot(w.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> inner;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.interior[i]) {
      slot[i] = inner.size();
      inner.push_back(i);
    }
  }
  std::vector<CsrMatrix::Triplet> trip;
  const auto adj = w.adjacency();
  for (const std::size_t i : inner) {
    double diag = 0.0;
    for (const auto& [j, om] : adj[i]) {
      diag += om;
      if (w.interior[j]) trip.push_back({slot[i], slot[j], -om});
    }
    trip.push_back({slot[i], slot[i], diag});
  }
  const CsrMatrix a(inner.size(), std::move(trip));
  std::vector<double> b(inner.size());
  for (std::size_t k = 0; k < inner.size(); ++k) b[k] = rhs[inner[k]];
  CgOptions opt;
  opt.tolerance = 1e-14;
  const auto sol = conjugate_gradient(a, b, opt);
  VertexFunction u;
  for (std::size_t i = 0; i < w.size(); ++i) {
    u.set(w.vertices[i], w.interior[i] ? sol.x[slot[i]] : 0.0);
  }
  return u;
}

/// d_l between two edge points of a metric graph.
double point_distance(const MetricGraph& X, const EdgePoint& p, const EdgePoint& q) {
  const auto& e = X.edge(p.edge);
  const double via_s = p.t + quotient_distance(X, e.source, q);
  const double via_t = (e.length - p.t) + quotient_distance(X, e.target, q);
  double best = std::min(via_s, via_t);
  if (p.edge == q.edge) best = std::min(best, std::abs(p.t - q.t));
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Identity corpus

CorpusCase corpus_case(std::uint64_t seed, std::size_t index) {
  SplitMix64 rng(seed, 0x1D000000ULL + index);
  const auto spec = random_spec(rng, 5, 30);
  auto g = random_graph(spec);
  auto window = whole_graph_window(g);
  const EdgeLengths lengths =
      index % 2 == 0 ? degree_metric(g, 1.0) : random_table_lengths(g, rng, 0.1, 1.0, 1.0);
  const auto d = shared_path_metric(g, lengths);
  auto X = build_metric_graph(g, d, 1.0, window);
  VertexFunction u, w;
  const bool positive_w = index % 4 == 3;
  for (const VertexId x : window.vertices) {
    u.set(x, uniform(rng, -1.0, 1.0));
    w.set(x, positive_w ? uniform(rng, 0.0, 1.0) : uniform(rng, -1.0, 1.0));
  }
  const double threshold = uniform(rng, -0.8, 0.8);
  return {std::move(g), std::move(window), std::move(X), std::move(u), threshold, std::move(w)};
}

double IdentityResiduals::max() const {
  return std::max({ibp, vertex_terms, interpolation_energy, interpolation_l2, interpolation_l1,
                   edge_measure, boundary_derivatives, std::max(0.0, -l2_half_margin)});
}

IdentityResiduals identity_residuals(const CorpusCase& c) {
  const auto& X = c.metric_graph;
  IdentityResiduals r;
  const auto v = woymp_extend(X, c.u, c.threshold);

  for (const VertexId x : X.vertices()) {
    r.ibp = std::max(r.ibp, std::abs(ibp_check(X, v, hat_function(X, x)).residual));
  }
  r.ibp = std::max(r.ibp, std::abs(ibp_check(X, v, interpolate(X, c.w)).residual));

  VertexFunction phi;
  for (const VertexId x : X.vertices()) {
    if (c.u.at(x) > c.threshold) phi.set(x, c.w(x));
  }
  r.vertex_terms = std::abs(vertex_term_identity(X, c.u, c.threshold, phi).residual);

  const auto interp = interpolation_bounds_check(X, c.w);
  r.interpolation_energy = interp.max_energy_residual;
  r.interpolation_l2 = interp.max_l2_residual;
  r.interpolation_l1 = std::max(interp.max_l1_residual, interp.global_l1_residual.value_or(0.0));
  r.l2_half_margin = interp.worst_l2_half_margin;

  VertexFunction ones;
  for (const VertexId x : X.vertices()) ones.set(x, 1.0);
  double expected_total = 0.0;
  for (const auto& e : X.edges()) {
    const double direct = e.omega * e.length * e.length;
    r.edge_measure = std::max(r.edge_measure, std::abs(e.measure() - direct));
    expected_total += direct;
  }
  r.edge_measure = std::max(r.edge_measure,
                            std::abs(measure_integral(X, interpolate(X, ones)) - expected_total));

  for (std::size_t e = 0; e < X.num_edges(); ++e) {
    const auto& edge = X.edge(e);
    const double us = c.u.at(edge.source), ut = c.u.at(edge.target);
    const double slope = (ut - us) / edge.length;
    const bool meets = us > c.threshold || ut > c.threshold;
    const double h = meets ? 0.5 * edge.length : 0.0;
    const auto [d0, dl] = boundary_derivatives(X, v, e);
    r.boundary_derivatives =
        std::max({r.boundary_derivatives, std::abs(d0 - (slope - h)), std::abs(dl - (slope + h))});
  }
  return r;
}

SuiteResult identity_suite(std::uint64_t seed, std::size_t count, double tolerance) {
  Tally t("identity_corpus", "metric-graph", tolerance);
  for (std::size_t i = 0; i < count; ++i) t.residual(identity_residuals(corpus_case(seed, i)).max());
  t.note("ibp, vertex-term regrouping, interpolation energy/L1/L2, edge measure, boundary derivatives");
  return t.result();
}

// ---------------------------------------------------------------------------

SuiteResult comparison_suite(std::uint64_t seed, std::size_t count) {
  Tally t("comparison_lemma", "metric-graph", 1e-12, true);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng(seed, 0xC0000000ULL + i);
    const auto g = random_graph(random_spec(rng, 5, 50));
    const auto window = whole_graph_window(g);
    const auto d = shared_path_metric(g, degree_metric(g, 1.0));
    const auto X = build_metric_graph(g, d, 1.0, window);
    const VertexId x0 = window.vertices[rng() % window.size()];
    double reach = 0.0;
    for (const double r : X.vertex_distances(x0)) {
      if (std::isfinite(r)) reach = std::max(reach, r);
    }
    std::vector<double> radii;
    for (int k = 1; k <= 16; ++k) radii.push_back(1.1 * reach * k / 16.0);
    const auto rep = compare_lemma(window, d, X, x0, radii, 5000, seed + i);
    t.margin(std::min(rep.worst_distance_margin, rep.worst_volume_margin));
  }
  return t.result();
}

// ---------------------------------------------------------------------------
// WOYMP windows

std::vector<WoympWindow> woymp_windows() {
  struct Source {
    std::string label;
    WeightedGraph g;
    VertexId center;
    double radius;
  };
  std::vector<Source> src;
  src.push_back({"birth_death alpha=1", birth_death(1.0), 0, 6});
  src.push_back({"birth_death alpha=2", birth_death(2.0), 0, 10});
  src.push_back({"birth_death alpha=3", birth_death(3.0), 0, 6});
  src.push_back({"birth_death alpha=3 off-center", birth_death(3.0), 20, 5});
  src.push_back({"anti_tree a=2", anti_tree(2.0), 0, 3});
  src.push_back({"anti_tree a=3", anti_tree(3.0), 0, 3});
  src.push_back({"lattice radius 3", lattice2d(), lattice_id(0, 0), 3});
  src.push_back({"lattice radius 5", lattice2d(), lattice_id(0, 0), 5});
  for (std::uint64_t s = 0; s < 6; ++s) {
    RandomGraphSpec spec;
    spec.n = 20 + 4 * s;
    spec.edge_prob = 0.12;
    spec.seed = 100 + s;
    src.push_back({"random_graph seed=" + std::to_string(spec.seed), random_graph(spec), 0, 1});
  }
  for (std::uint64_t s = 0; s < 3; ++s) {
    RandomGraphSpec spec;
    spec.n = 30;
    spec.seed = 200 + s;
    src.push_back({"random_tree seed=" + std::to_string(spec.seed), random_tree(spec), 0, 3});
  }
  {
    GraphBuilder b;
    for (VertexId i = 0; i < 12; ++i) {
      b.add_vertex(i, 1.0);
      b.add_edge(i, (i + 1) % 12, 1.0 + 0.25 * double(i % 3));
    }
    src.push_back({"cycle C12", b.build(), 0, 4});
  }
  {
    GraphBuilder b;  // spider: five legs of length 3
    b.add_vertex(0, 2.0);
    for (VertexId leg = 0; leg < 5; ++leg) {
      VertexId prev = 0;
      for (VertexId k = 1; k <= 3; ++k) {
        const VertexId id = 1 + leg * 3 + (k - 1);
        b.add_vertex(id, 0.5 + 0.25 * double(k));
        b.add_edge(prev, id, 1.0 + double(leg));
        prev = id;
      }
    }
    src.push_back({"spider", b.build(), 0, 2});
  }
  {
    GraphBuilder b;  // K8 with a pendant path at vertex 7
    for (VertexId i = 0; i < 10; ++i) b.add_vertex(i, 1.0);
    for (VertexId i = 0; i < 8; ++i) {
      for (VertexId j = i + 1; j < 8; ++j) b.add_edge(i, j, 0.5);
    }
    b.add_edge(7, 8, 2.0);
    b.add_edge(8, 9, 2.0);
    src.push_back({"K8 with pendant", b.build(), 0, 1});
  }

  std::vector<WoympWindow> out;
  std::size_t k = 0;
  for (auto& s : src) {
    const auto base = ball_window(s.g, unit_lengths(), s.center, s.radius);
    if (base.boundary_vertices().empty() || base.interior_vertices().empty()) {
      throw std::logic_error("woymp window '" + s.label + "' needs interior and boundary vertices");
    }
    // Delta u = -slope on the interior, u = 0 on the boundary
    const double slope = 1.01 + 0.05 * double(k++);
    std::vector<double> rhs(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) rhs[i] = -base.mu[i] * slope;
    auto u = dirichlet_solve(base, rhs);
    // rescale mu (and u with it) until some interior vertex lies within 1 of sup u = 0
    double top = -std::numeric_limits<double>::infinity();
    for (const VertexId x : base.interior_vertices()) top = std::max(top, u.at(x));
    const double kappa = std::min(1.0, 0.5 / std::abs(top));
    auto g = s.g;
    if (kappa < 1.0) {
      auto inner = std::make_shared<WeightedGraph>(s.g);
      g = s.g.with_measure([inner, kappa](VertexId x) { return kappa * inner->measure(x); });
      VertexFunction scaled;
      for (const auto& [x, val] : u.values()) scaled.set(x, kappa * val);
      u = std::move(scaled);
    }
    auto window = make_window(g, base.vertices);
    const auto d = shared_path_metric(g, degree_metric(g, 1.0));
    out.push_back({s.label, std::move(g), std::move(window), d, 1.0, std::move(u), 1.0});
  }
  return out;
}

SuiteResult woymp_inequality_suite() {
  Tally t("woymp_inequality", "metric-graph", 1e-10, true);
  std::size_t hats = 0;
  for (const auto& w : woymp_windows()) {
    const auto X = build_metric_graph(w.graph, w.d, w.c0, w.window);
    const auto rep = woymp_inequality_check(w.graph, w.window, X, w.u, w.alpha);
    if (rep.status == InequalityStatus::inapplicable) {
      t.check(false);
      continue;
    }
    hats += rep.centers.size();
    t.margin(rep.worst_margin);
  }
  t.note(std::to_string(hats) + " hat functions");
  return t.result();
}

// ---------------------------------------------------------------------------

SuiteResult sobolev_suite(std::uint64_t seed, std::size_t count) {
  Tally t("sobolev", "metric-graph", 0.0, true);
  SplitMix64 rng(seed, 0x50B0);
  std::vector<IntervalSample> samples;
  for (std::size_t i = 0; i < count; ++i) {
    samples.push_back({{uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3)},
                       std::exp(uniform(rng, std::log(0.01), std::log(5.0)))});
  }
  const MetricGraph empty;
  const auto intervals = sobolev_check(empty, 1.0, samples, {});
  std::size_t violations = intervals.interval_violations;
  double worst = intervals.worst_interval_margin;
  std::size_t checks = intervals.interval_samples;

  // piecewise quadratics on corpus metric graphs (edge lengths <= c0 = 1)
  const std::size_t graphs = std::max<std::size_t>(1, count / 20);
  for (std::size_t k = 0; k < graphs; ++k) {
    const auto c = corpus_case(seed, 1000 + k);
    std::vector<PiecewisePoly> fns;
    for (std::size_t j = 0; j < 20; ++j) {
      VertexFunction u;
      for (const VertexId x : c.metric_graph.vertices()) u.set(x, uniform(rng, -2, 2));
      fns.push_back(woymp_extend(c.metric_graph, u, uniform(rng, -2, 2)));
    }
    const auto rep = sobolev_check(c.metric_graph, 1.0, {}, fns);
    violations += rep.trace_violations + rep.global_violations;
    worst = std::min({worst, rep.worst_trace_margin, rep.worst_global_margin});
    checks += rep.trace_checks + rep.global_checks;
  }
  SuiteResult r = t.result();
  r.cases = checks;
  r.failures = violations;
  r.worst = worst;
  r.note = std::to_string(count) + " interval samples, " + std::to_string(graphs * 20) +
           " piecewise quadratics, C = " + std::to_string(vertex_trace_constant(1.0));
  return r;
}

// ---------------------------------------------------------------------------
// Remaining property suites

namespace {

SuiteResult green_identity_suite(std::uint64_t seed) {
  Tally t("green_identity", "graph-core", 1e-12);
  for (std::size_t i = 0; i < 100; ++i) {
    SplitMix64 rng(seed, 0x6000 + i);
    const auto g = random_graph(random_spec(rng, 10, 50));
    const auto window = ball_window(g, unit_lengths(), 0, 1 + double(rng() % 3));
    VertexFunction u;
    for (const VertexId x : g.vertices()) u.set(x, 0.0);
    for (const VertexId x : window.interior_vertices()) u.set(x, uniform(rng, -1, 1));
    double rhs = 0.0;
    for (const VertexId x : window.vertices) rhs += g.measure(x) * u(x) * formal_laplacian(g, u, x);
    const double lhs = energy(g, u, u);
    t.residual(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  return t.result();
}

SuiteResult linearity_suite(std::uint64_t seed) {
  Tally t("laplacian_linearity", "graph-core", 1e-12);
  for (std::size_t i = 0; i < 100; ++i) {
    SplitMix64 rng(seed, 0x6100 + i);
    const auto g = random_graph(random_spec(rng, 5, 40));
    VertexFunction u, v, comb;
    const double a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
    for (const VertexId x : g.vertices()) {
      u.set(x, uniform(rng, -1, 1));
      v.set(x, uniform(rng, -1, 1));
      comb.set(x, a * u(x) + b * v(x));
    }
    double worst = 0.0;
    for (const VertexId x : g.vertices()) {
      const double lhs = formal_laplacian(g, comb, x);
      const double rhs = a * formal_laplacian(g, u, x) + b * formal_laplacian(g, v, x);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    t.residual(worst);
  }
  return t.result();
}

SuiteResult energy_form_suite(std::uint64_t seed) {
  Tally t("energy_bilinear_symmetric", "graph-core", 1e-12);
  for (std::size_t i = 0; i < 100; ++i) {
    SplitMix64 rng(seed, 0x6200 + i);
    const auto g = random_graph(random_spec(rng, 5, 40));
    VertexFunction u, v, w, comb;
    const double a = uniform(rng, -3, 3);
    for (const VertexId x : g.vertices()) {
      if (rng() % 3 == 0) continue;  // leave some vertices outside the supports
      u.set(x, uniform(rng, -1, 1));
      v.set(x, uniform(rng, -1, 1));
      w.set(x, uniform(rng, -1, 1));
    }
    for (const VertexId x : g.vertices()) comb.set(x, a * u(x) + v(x));
    const double euw = energy(g, u, w);
    const double bil = std::abs(energy(g, comb, w) - (a * euw + energy(g, v, w)));
    const double sym = std::abs(euw - energy(g, w, u));
    const double neg = std::max(0.0, -energy(g, u, u));
    t.residual(std::max({bil, sym, neg}) / std::max(1.0, std::abs(euw)));
  }
  return t.result();
}

bool same_edges(const WeightedGraph& a, const WeightedGraph& b, const std::vector<VertexId>& vs) {
  for (const VertexId x : vs) {
    const auto na = a.neighbors(x), nb = b.neighbors(x);
    if (na.size() != nb.size()) return false;
    for (std::size_t k = 0; k < na.size(); ++k) {
      if (na[k].id != nb[k].id || na[k].weight != nb[k].weight) return false;
    }
  }
  return true;
}

SuiteResult truncation_idempotent_suite(std::uint64_t seed) {
  Tally t("truncation_idempotent", "graph-core", 0.0);
  for (std::size_t i = 0; i < 50; ++i) {
    SplitMix64 rng(seed, 0x6300 + i);
    const auto g = random_graph(random_spec(rng, 5, 40));
    const auto d = shared_path_metric(g, random_table_lengths(g, rng, 0.1, 2.0, 1.0));
    const double c0 = uniform(rng, 0.3, 1.5);
    const auto once = truncate_by_jump_size(g, d, c0);
    const auto twice = truncate_by_jump_size(once, d, c0);
    t.check(same_edges(once, twice, g.vertices()));
  }
  return t.result();
}

SuiteResult degree_metric_suite(std::uint64_t seed) {
  Tally t("degree_metric_adapted", "adapted-metrics", 1e-12);
  for (std::size_t i = 0; i < 100; ++i) {
    SplitMix64 rng(seed, 0x6400 + i);
    const auto g = random_graph(random_spec(rng, 2, 50));
    const auto rep = check_adapted(g, shared_path_metric(g, degree_metric(g, 1.0)), 1.0,
                                   whole_graph_window(g));
    t.residual(std::max(0.0, rep.max_sum - 1.0));
    if (rep.verdict != Adaptedness::adapted) t.check(false);
  }
  return t.result();
}

SuiteResult metric_axioms_suite(std::uint64_t seed) {
  Tally t("metric_axioms", "adapted-metrics", 1e-12);
  for (std::size_t i = 0; i < 10; ++i) {
    SplitMix64 rng(seed, 0x6500 + i);
    const auto g = random_graph(random_spec(rng, 10, 50));
    const auto& vs = g.vertices();
    const EdgeLengths lengths =
        i % 2 == 0 ? degree_metric(g, 1.0) : random_table_lengths(g, rng, 0.05, 3.0, 1.0);
    const PathMetric d(g, lengths);
    for (std::size_t k = 0; k < 100; ++k) {
      const VertexId x = vs[rng() % vs.size()], y = vs[rng() % vs.size()],
                     z = vs[rng() % vs.size()];
      const double dxy = d.distance(x, y), dyx = d.distance(y, x);
      double bad = std::max({std::abs(dxy - dyx), std::abs(d.distance(x, x)),
                             d.distance(x, z) - (dxy + d.distance(y, z))});
      if (x != y && !(dxy > 0.0)) bad = 1.0;
      t.residual(std::max(0.0, bad));
    }
  }
  return t.result();
}

SuiteResult truncation_adapted_suite(std::uint64_t seed) {
  Tally t("truncation_adapted", "adapted-metrics", 1e-12);
  std::size_t removed = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    SplitMix64 rng(seed, 0x6600 + i);
    auto spec = random_spec(rng, 5, 40);
    spec.weight_lo = 0.05;
    spec.weight_hi = 1.0;
    const auto g = random_graph(spec);
    // weakly adapted for c0 = 1 with some edges longer than 1
    const auto d = shared_path_metric(g, degree_metric(g, 5.0));
    const auto gt = truncate_by_jump_size(g, d, 1.0);
    for (const VertexId x : g.vertices()) removed += g.neighbors(x).size() - gt.neighbors(x).size();
    const auto rep = check_adapted(gt, d, 1.0, whole_graph_window(gt));
    t.residual(std::max({0.0, rep.max_sum - 1.0, rep.max_edge_distance - 1.0}));
    if (rep.verdict != Adaptedness::adapted) t.check(false);
  }
  t.note(std::to_string(removed / 2) + " long edges removed");
  return t.result();
}

SuiteResult max_principle_suite(std::uint64_t seed) {
  Tally t("resolvent_range", "completeness-lab", 1e-10);
  for (std::size_t i = 0; i < 100; ++i) {
    SplitMix64 rng(seed, 0x6700 + i);
    const auto g = random_graph(random_spec(rng, 10, 60));
    const auto window = ball_window(g, unit_lengths(), 0, 1 + double(rng() % 3));
    const auto sol = dirichlet_resolvent(window, uniform(rng, 0.1, 5.0));
    double bad = 0.0;
    for (const double v : sol.values) bad = std::max({bad, -v, v - 1.0});
    t.residual(bad);
  }
  return t.result();
}

SuiteResult domain_monotonicity_suite(std::uint64_t seed) {
  Tally t("domain_monotonicity", "completeness-lab", 1e-10);
  for (std::size_t i = 0; i < 50; ++i) {
    SplitMix64 rng(seed, 0x6800 + i);
    const auto g = random_graph(random_spec(rng, 20, 80));
    const double lambda = uniform(rng, 0.1, 3.0);
    const auto small = dirichlet_resolvent(ball_window(g, unit_lengths(), 0, 1), lambda);
    const auto large = dirichlet_resolvent(ball_window(g, unit_lengths(), 0, 2), lambda);
    double bad = 0.0;
    for (const auto& [x, v] : small.u.values()) bad = std::max(bad, v - large.u(x));
    t.residual(bad);
  }
  return t.result();
}

SuiteResult lambda_harmonic_suite(std::uint64_t seed) {
  Tally t("lambda_harmonic_residual", "completeness-lab", 1e-9);
  auto check = [&](const WeightedGraph& g, const GraphWindow& window, double lambda) {
    const auto sol = dirichlet_resolvent(window, lambda);
    // w = 1 - u, which is 1 off the window
    double worst = 0.0;
    for (const VertexId x : window.vertices) {
      const double wx = 1.0 - sol.u(x);
      double lap = 0.0;
      for (const auto& n : g.neighbors(x)) {
        const double wy = window.contains(n.id) ? 1.0 - sol.u(n.id) : 1.0;
        lap += n.weight * (wx - wy);
      }
      worst = std::max(worst, std::abs(lap / g.measure(x) + lambda * wx));
    }
    t.residual(worst);
  };
  for (std::size_t i = 0; i < 50; ++i) {
    SplitMix64 rng(seed, 0x6900 + i);
    const auto g = random_graph(random_spec(rng, 10, 60));
    check(g, ball_window(g, unit_lengths(), 0, 2), uniform(rng, 0.1, 3.0));
  }
  const auto bd = birth_death(1.0);
  check(bd, ball_window(bd, unit_lengths(), 0, 200), 1.0);
  return t.result();
}

SuiteResult measure_reduction_suite(std::uint64_t seed) {
  Tally t("measure_reduction", "completeness-lab", 1e-12);
  SplitMix64 rng(seed, 0x6A00);
  for (const auto& w : woymp_windows()) {
    double sup = -std::numeric_limits<double>::infinity();
    for (const VertexId x : w.window.vertices) sup = std::max(sup, w.u.at(x));
    const WoympCertificate cert{w.u, w.alpha, sup};
    if (woymp_check(w.graph, cert, w.window).status != WoympStatus::violating) {
      t.check(false);
      continue;
    }
    const std::uint64_t salt = rng();
    auto inner = std::make_shared<WeightedGraph>(w.graph);
    const auto reduced = w.graph.with_measure([inner, salt](VertexId x) {
      const double f = 0.3 + 0.7 * double(SplitMix64::mix(x ^ salt) >> 11) * 0x1.0p-53;
      return f * inner->measure(x);
    });
    const auto window = make_window(reduced, w.window.vertices);
    t.check(woymp_check(reduced, cert, window).status == WoympStatus::violating);

    // the special measure of an adapted metric sits below mu
    const auto nu = special_measure(w.graph, w.d);
    double excess = 0.0;
    for (const VertexId x : w.window.interior_vertices()) {
      excess = std::max(excess, (nu(x) - w.graph.measure(x)) / w.graph.measure(x));
    }
    t.residual(excess);
  }
  return t.result();
}

/// Upper 0.001 quantiles of the chi-square distribution, df = 1..20.
constexpr std::array<double, 20> kChiSquare999 = {
    10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322, 26.124, 27.877, 29.588,
    31.264, 32.909, 34.528, 36.123, 37.697, 39.252, 40.790, 42.312, 43.820, 45.315};

SuiteResult monte_carlo_law_suite(std::uint64_t seed) {
  Tally t("chain_holding_and_jump_law", "completeness-lab", 0.0, true);
  GraphBuilder b;
  b.add_vertex(0, 2.0);
  double total = 0.0;
  for (VertexId k = 1; k <= 6; ++k) {
    b.add_vertex(k, 1.0);
    b.add_edge(0, k, double(k));
    total += double(k);
  }
  const auto g = b.build();
  const double rate = total / 2.0;
  ChainOptions opt;
  opt.jump_cap = 1;
  opt.horizon = 1e300;
  const std::size_t n = 20000;
  std::array<double, 10> hold_bins{};
  std::array<double, 6> jump_bins{};
  for (std::size_t i = 0; i < n; ++i) {
    const auto tr = simulate_chain(g, 0, opt, seed, i);
    const double cdf = 1.0 - std::exp(-rate * tr.times[1]);
    hold_bins[std::min<std::size_t>(9, std::size_t(cdf * 10.0))] += 1.0;
    jump_bins[tr.vertices[1] - 1] += 1.0;
  }
  double chi_hold = 0.0;
  for (const double c : hold_bins) chi_hold += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
  double chi_jump = 0.0;
  for (std::size_t k = 0; k < 6; ++k) {
    const double expected = n * double(k + 1) / total;
    chi_jump += (jump_bins[k] - expected) * (jump_bins[k] - expected) / expected;
  }
  t.margin(kChiSquare999[8] - chi_hold);
  t.margin(kChiSquare999[4] - chi_jump);
  t.note("chi-square holding " + std::to_string(chi_hold) + " (df 9), jump " +
         std::to_string(chi_jump) + " (df 5)");
  return t.result();
}

SuiteResult fot_suite() {
  Tally t("fot_probe_vanishing", "completeness-lab", 0.0);
  const auto g = birth_death(1.0);
  const PathMetric d(g, unit_lengths());
  VertexFunction w{{3, 1.0}, {4, -0.5}, {7, 2.0}};
  const auto probe = fot_probe(g, 0, {1, 2, 4, 8, 16, 32}, w, d.as_function());
  t.residual(std::abs(probe.energies.back()));
  t.check(probe.trend == FotTrend::vanishing);
  return t.result();
}

SuiteResult ball_measure_suite(std::uint64_t seed) {
  Tally t("ball_measure_monotone", "metric-graph", 1e-12);
  for (std::size_t i = 0; i < 50; ++i) {
    const auto c = corpus_case(seed, 2000 + i);
    const auto& X = c.metric_graph;
    const auto from = X.vertex_distances(X.vertices().front());
    double reach = 0.0;
    for (const double r : from) reach = std::max(reach, r);
    double prev = 0.0, bad = 0.0;
    for (int k = 0; k <= 64; ++k) {
      const double m = ball_measure(X, from, (reach + 1.0) * k / 64.0);
      bad = std::max(bad, prev - m);
      prev = m;
    }
    bad = std::max(bad, std::abs(prev - X.total_measure()) / std::max(1.0, X.total_measure()));
    t.residual(bad);
  }
  return t.result();
}

SuiteResult quotient_triangle_suite(std::uint64_t seed) {
  Tally t("quotient_triangle", "metric-graph", 1e-12);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto c = corpus_case(seed, 3000 + i);
    const auto& X = c.metric_graph;
    if (X.num_edges() == 0) continue;
    SplitMix64 rng(seed, 0x6B00 + i);
    auto pick = [&] {
      const std::size_t e = rng() % X.num_edges();
      return EdgePoint{e, X.edge(e).length * rng.uniform_open()};
    };
    for (int k = 0; k < 50; ++k) {
      const auto p = pick(), q = pick(), r = pick();
      const double bad = point_distance(X, p, r) - point_distance(X, p, q) - point_distance(X, q, r);
      t.residual(std::max(0.0, bad));
    }
  }
  return t.result();
}

SuiteResult profile_suite(std::uint64_t seed) {
  Tally t("volume_profiles", "growth-analysis", 1e-12);
  for (std::size_t i = 0; i < 30; ++i) {
    SplitMix64 rng(seed, 0x6C00 + i);
    const auto g = random_graph(random_spec(rng, 10, 50));
    const auto lengths = degree_metric(g, 1.0);
    const auto d = shared_path_metric(g, lengths);
    const auto X = build_metric_graph(g, d, 1.0, whole_graph_window(g));
    const auto graph_prof = volume_profile(g, lengths, 0, 4.0, 32);
    const auto metric_prof = metric_volume_profile(X, 0, 4.0, 32);
    double bad = 0.0;
    for (std::size_t k = 0; k < graph_prof.volumes.size(); ++k) {
      if (k > 0) {
        bad = std::max(bad, graph_prof.volumes[k - 1] - graph_prof.volumes[k]);
        bad = std::max(bad, metric_prof.volumes[k - 1] - metric_prof.volumes[k]);
      }
      bad = std::max(bad, metric_prof.volumes[k] - graph_prof.volumes[k]);
    }
    t.residual(bad);
  }
  return t.result();
}

SuiteResult grigoryan_monotone_suite() {
  Tally t("grigoryan_monotone", "growth-analysis", 1e-12);
  for (const double power : {1.0, 2.0, 3.0}) {
    for (const double factor : {0.9, 0.5, 0.1}) {
      VolumeProfile big, small;
      for (int k = 1; k <= 128; ++k) {
        const double r = 8.0 * k / 128.0;
        big.radii.push_back(r);
        small.radii.push_back(r);
        big.volumes.push_back(std::exp(std::pow(r, power)) + 1.0);
        small.volumes.push_back(factor * big.volumes.back());
      }
      const double a = grigoryan_integral(big, 1.0).value;
      const double b = grigoryan_integral(small, 1.0).value;
      t.residual(std::max(0.0, a - b));
    }
  }
  return t.result();
}

SuiteResult families_validate_suite(std::uint64_t seed) {
  Tally t("generated_graphs_validate", "families", 0.0);
  auto check = [&](const WeightedGraph& g, const GraphWindow& w) {
    t.residual(double(validate(g, w).size()));
  };
  for (std::size_t i = 0; i < 20; ++i) {
    SplitMix64 rng(seed, 0x6D00 + i);
    const auto spec = random_spec(rng, 1, 100);
    const auto g = random_graph(spec);
    check(g, whole_graph_window(g));
    const auto tr = random_tree(spec);
    check(tr, whole_graph_window(tr));
  }
  for (const double alpha : {1.0, 2.0, 3.0}) {
    const auto g = birth_death(alpha);
    check(g, ball_window(g, unit_lengths(), 0, 50));
  }
  for (const double a : {0.0, 1.0, 2.0, 2.5, 3.0}) {
    const auto g = anti_tree(a);
    check(g, ball_window(g, unit_lengths(), 0, 4));
  }
  const auto lat = lattice2d();
  check(lat, ball_window(lat, unit_lengths(), lattice_id(0, 0), 6));
  return t.result();
}

SuiteResult anti_tree_reduction_suite() {
  Tally t("anti_tree_reduction", "families", 0.0);
  for (const double a : {0.0, 1.0, 1.5, 2.0, 3.0}) {
    const auto g = anti_tree(a);
    VertexId first = 0;
    for (std::uint64_t k = 0; k < 6; ++k) {
      const auto sk = anti_tree_sphere_size(a, k);
      const auto sk1 = anti_tree_sphere_size(a, k + 1);
      double between = 0.0;
      for (VertexId x = first; x < first + sk; ++x) {
        for (const auto& n : g.neighbors(x)) {
          if (anti_tree_depth(a, n.id) == k + 1) between += n.weight;
        }
      }
      t.residual(std::abs(between - double(sk) * double(sk1)));
      first += sk;
    }
  }
  return t.result();
}

}  // namespace

std::vector<SuiteResult> verify_all(std::uint64_t seed) {
  std::vector<SuiteResult> out;
  out.push_back(green_identity_suite(seed));
  out.push_back(linearity_suite(seed));
  out.push_back(energy_form_suite(seed));
  out.push_back(truncation_idempotent_suite(seed));
  out.push_back(degree_metric_suite(seed));
  out.push_back(metric_axioms_suite(seed));
  out.push_back(truncation_adapted_suite(seed));
  out.push_back(max_principle_suite(seed));
  out.push_back(domain_monotonicity_suite(seed));
  out.push_back(lambda_harmonic_suite(seed));
  out.push_back(measure_reduction_suite(seed));
  out.push_back(monte_carlo_law_suite(seed));
  out.push_back(fot_suite());
  out.push_back(identity_suite(seed));
  out.push_back(comparison_suite(seed));
  out.push_back(ball_measure_suite(seed));
  out.push_back(quotient_triangle_suite(seed));
  out.push_back(woymp_inequality_suite());
  out.push_back(sobolev_suite(seed));
  out.push_back(profile_suite(seed));
  out.push_back(grigoryan_monotone_suite());
  out.push_back(families_validate_suite(seed));
  out.push_back(anti_tree_reduction_suite());
  return out;
}

}  // namespace sclab
