#include "sclab/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "sclab/completeness.hpp"
#include "sclab/rng.hpp"

namespace sclab {

namespace {

constexpr double kContinuityTolerance = 1e-10;
constexpr double kInequalitySlack = 1e-10;

double scale_of(double a, double b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

MetricGraph::MetricGraph(std::vector<VertexId> vertices, std::vector<MetricEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i], i);
  incident_.resize(vertices_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    incident_.at(local(edges_[e].source)).push_back(e);
    incident_.at(local(edges_[e].target)).push_back(e);
  }
}

std::size_t MetricGraph::local(VertexId x) const {
  auto it = index_.find(x);
  if (it == index_.end()) {
    throw std::out_of_range("vertex " + std::to_string(x) + " is not in the metric graph");
  }
  return it->second;
}

const std::vector<std::size_t>& MetricGraph::incident(VertexId x) const {
  return incident_.at(local(x));
}

double MetricGraph::total_measure() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.measure();
  return s;
}

double MetricGraph::special_measure(VertexId x) const {
  double s = 0.0;
  for (auto e : incident(x)) s += edges_[e].omega * edges_[e].length * edges_[e].length;
  return s;
}

std::vector<double> MetricGraph::vertex_distances(VertexId x0) const {
  std::vector<double> dist(vertices_.size(), kUnreachable);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  const std::size_t s = local(x0);
  dist[s] = 0.0;
  heap.push({0.0, s});
  while (!heap.empty()) {
    const auto [d, i] = heap.top();
    heap.pop();
    if (d > dist[i]) continue;
    for (auto e : incident_[i]) {
      const auto& edge = edges_[e];
      const std::size_t j = local(edge.source) == i ? local(edge.target) : local(edge.source);
      const double cand = d + edge.length;
      if (cand < dist[j]) {
        dist[j] = cand;
        heap.push({cand, j});
      }
    }
  }
  return dist;
}

MetricGraph build_metric_graph(const WeightedGraph& g, const DistanceFn& d, double c0,
                               const GraphWindow& window, Orientation orientation) {
  std::vector<MetricEdge> edges;
  edges.reserve(window.edges.size());
  for (const auto& we : window.edges) {
    VertexId s = std::min(window.vertices[we.a], window.vertices[we.b]);
    VertexId t = std::max(window.vertices[we.a], window.vertices[we.b]);
    if (orientation == Orientation::larger_id_first) std::swap(s, t);
    const double len = d(s, t);
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw std::invalid_argument("build_metric_graph: non-positive or infinite length on edge (" +
                                  std::to_string(s) + "," + std::to_string(t) + ")");
    }
    const double pq = we.weight * len;
    edges.push_back({s, t, we.weight, len, pq, pq});
  }
  MetricGraph X(window.vertices, std::move(edges));
  if (window.size() > 0) {
    const auto rep = check_adapted(g, d, c0, window);
    if (rep.verdict != Adaptedness::adapted) {
      std::ostringstream msg;
      msg << "metric is " << to_string(rep.verdict) << " (max adapted sum " << rep.max_sum
          << ", longest edge " << rep.max_edge_distance << ", c0 " << c0 << ")";
      X.warnings.push_back(msg.str());
    }
  }
  return X;
}

double quotient_distance(const MetricGraph& X, const std::vector<double>& from_x0,
                         const EdgePoint& pt) {
  const auto& e = X.edge(pt.edge);
  if (pt.t < 0.0 || pt.t > e.length) throw std::out_of_range("edge point outside [0, l(e)]");
  const double a = from_x0[X.local(e.source)];
  const double b = from_x0[X.local(e.target)];
  return std::min(a + pt.t, b + (e.length - pt.t));
}

double quotient_distance(const MetricGraph& X, VertexId x0, const EdgePoint& pt) {
  return quotient_distance(X, X.vertex_distances(x0), pt);
}

double ball_measure(const MetricGraph& X, const std::vector<double>& from_x0, double r) {
  double total = 0.0;
  for (const auto& e : X.edges()) {
    const double a = from_x0[X.local(e.source)];
    const double b = from_x0[X.local(e.target)];
    const double cover =
        std::min(e.length, std::max(0.0, r - a) + std::max(0.0, r - b));
    total += e.q * cover;
  }
  return total;
}

double ball_measure(const MetricGraph& X, VertexId x0, double r) {
  return ball_measure(X, X.vertex_distances(x0), r);
}

ComparisonReport compare_lemma(const GraphWindow& window, const DistanceFn& d,
                               const MetricGraph& X, VertexId x0,
                               const std::vector<double>& radii, std::size_t max_pairs,
                               std::uint64_t seed) {
  ComparisonReport rep;
  const std::size_t n = window.size();
  std::vector<std::vector<double>> dl_rows(n);
  auto dl = [&](std::size_t i, std::size_t j) {
    if (dl_rows[i].empty()) dl_rows[i] = X.vertex_distances(window.vertices[i]);
    return dl_rows[i][X.local(window.vertices[j])];
  };
  bool first = true;
  auto check_pair = [&](std::size_t i, std::size_t j) {
    const double margin = dl(i, j) - d(window.vertices[i], window.vertices[j]);
    if (first || margin < rep.worst_distance_margin) rep.worst_distance_margin = margin;
    first = false;
    ++rep.pairs_checked;
  };
  const std::size_t all_pairs = n < 2 ? 0 : n * (n - 1) / 2;
  if (all_pairs <= max_pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) check_pair(i, j);
    }
  } else {
    SplitMix64 rng(seed, 0xC0FFEE);
    for (std::size_t k = 0; k < max_pairs; ++k) {
      const std::size_t i = rng() % n;
      std::size_t j = rng() % (n - 1);
      if (j >= i) ++j;
      check_pair(i, j);
    }
  }

  const auto from_x0 = X.vertex_distances(x0);
  first = true;
  for (const double r : radii) {
    double vol = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d(x0, window.vertices[i]) <= r) vol += window.mu[i];
    }
    const double mvol = ball_measure(X, from_x0, r);
    rep.radii.push_back(r);
    rep.graph_volumes.push_back(vol);
    rep.metric_volumes.push_back(mvol);
    const double margin = vol - mvol;
    if (first || margin < rep.worst_volume_margin) rep.worst_volume_margin = margin;
    first = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------

double sup_abs(const EdgeQuadratic& f, double length) {
  double m = std::max(std::abs(f(0.0)), std::abs(f(length)));
  if (f.a != 0.0) {
    const double t = -f.b / (2.0 * f.a);
    if (t > 0.0 && t < length) m = std::max(m, std::abs(f(t)));
  }
  return m;
}

PiecewisePoly make_piecewise(const MetricGraph& X, std::vector<EdgeQuadratic> pieces,
                             VertexFunction vertex_values) {
  if (pieces.size() != X.num_edges()) {
    throw std::invalid_argument("piecewise polynomial: one piece per edge required");
  }
  PiecewisePoly f;
  f.pieces_ = std::move(pieces);
  f.vertex_values_ = std::move(vertex_values);
  return f;
}

PiecewisePoly PiecewisePoly::from_edges(const MetricGraph& X, std::vector<EdgeQuadratic> pieces) {
  if (pieces.size() != X.num_edges()) {
    throw std::invalid_argument("piecewise polynomial: one piece per edge required");
  }
  VertexFunction values;
  for (std::size_t e = 0; e < pieces.size(); ++e) {
    const auto& edge = X.edge(e);
    if (!values.contains(edge.source)) values.set(edge.source, pieces[e](0.0));
    if (!values.contains(edge.target)) values.set(edge.target, pieces[e](edge.length));
  }
  for (const VertexId x : X.vertices()) {
    if (!values.contains(x)) values.set(x, 0.0);
  }
  auto f = make_piecewise(X, std::move(pieces), std::move(values));
  const auto bad = f.invariant_violations(X);
  if (!bad.empty()) throw std::invalid_argument("piecewise polynomial: " + bad.front());
  return f;
}

std::vector<std::string> PiecewisePoly::invariant_violations(const MetricGraph& X) const {
  std::vector<std::string> out;
  for (std::size_t e = 0; e < pieces_.size(); ++e) {
    const auto& p = pieces_[e];
    const auto& edge = X.edge(e);
    if (p.a != 0.0 && p.a != 0.5) {
      out.push_back("edge " + std::to_string(e) + ": leading coefficient not in {0, 1/2}");
    }
    const double vs = vertex_values_(edge.source);
    const double vt = vertex_values_(edge.target);
    const double at0 = p(0.0);
    const double atl = p(edge.length);
    if (std::abs(at0 - vs) > kContinuityTolerance * scale_of(at0, vs) ||
        std::abs(atl - vt) > kContinuityTolerance * scale_of(atl, vt)) {
      out.push_back("edge " + std::to_string(e) + ": discontinuous at an endpoint");
    }
  }
  return out;
}

PiecewisePoly woymp_extend(const MetricGraph& X, const VertexFunction& u, double threshold) {
  std::vector<EdgeQuadratic> pieces;
  pieces.reserve(X.num_edges());
  for (const auto& e : X.edges()) {
    const double us = u.at(e.source);
    const double ut = u.at(e.target);
    const double slope = (ut - us) / e.length;
    if (us > threshold || ut > threshold) {
      pieces.push_back({0.5, slope - 0.5 * e.length, us});
    } else {
      pieces.push_back({0.0, slope, us});
    }
  }
  VertexFunction values;
  for (const VertexId x : X.vertices()) values.set(x, u.at(x));
  return make_piecewise(X, std::move(pieces), std::move(values));
}

std::pair<double, double> boundary_derivatives(const MetricGraph& X, const PiecewisePoly& v,
                                               std::size_t e) {
  const auto& p = v.piece(e);
  return {p.derivative(0.0), p.derivative(X.edge(e).length)};
}

double energy_form(const MetricGraph& X, const PiecewisePoly& f, const PiecewisePoly& g) {
  double s = 0.0;
  for (std::size_t e = 0; e < X.num_edges(); ++e) {
    const auto& edge = X.edge(e);
    const auto df = f.piece(e).polynomial().derivative();
    const auto dg = g.piece(e).polynomial().derivative();
    s += edge.p * (df * dg).integrate(0.0, edge.length);
  }
  return s;
}

double measure_integral(const MetricGraph& X, const PiecewisePoly& f) {
  double s = 0.0;
  for (std::size_t e = 0; e < X.num_edges(); ++e) {
    const auto& edge = X.edge(e);
    s += edge.q * f.piece(e).polynomial().integrate(0.0, edge.length);
  }
  return s;
}

PiecewisePoly interpolate(const MetricGraph& X, const VertexFunction& w) {
  std::vector<EdgeQuadratic> pieces;
  pieces.reserve(X.num_edges());
  for (const auto& e : X.edges()) {
    const double ws = w(e.source);
    const double wt = w(e.target);
    pieces.push_back({0.0, (wt - ws) / e.length, ws});
  }
  VertexFunction values;
  for (const VertexId x : X.vertices()) values.set(x, w(x));
  return make_piecewise(X, std::move(pieces), std::move(values));
}

VertexFunction restrict_to_vertices(const MetricGraph& X, const PiecewisePoly& f) {
  VertexFunction out;
  for (const VertexId x : X.vertices()) out.set(x, f.vertex_value(x));
  return out;
}

PiecewisePoly hat_function(const MetricGraph& X, VertexId x) {
  VertexFunction w;
  w.set(x, 1.0);
  return interpolate(X, w);
}

IbpTerms ibp_check(const MetricGraph& X, const PiecewisePoly& v, const PiecewisePoly& phi) {
  IbpTerms t;
  for (std::size_t e = 0; e < X.num_edges(); ++e) {
    const auto& edge = X.edge(e);
    const auto pv = v.piece(e).polynomial();
    const auto pphi = phi.piece(e).polynomial();
    const auto dv = pv.derivative();
    t.energy += edge.p * (dv * pphi.derivative()).integrate(0.0, edge.length);
    t.bulk -= edge.p * (dv.derivative() * pphi).integrate(0.0, edge.length);
    t.boundary += edge.p * (dv(edge.length) * pphi(edge.length) - dv(0.0) * pphi(0.0));
  }
  t.residual = t.energy - (t.bulk + t.boundary);
  return t;
}

VertexTermIdentity vertex_term_identity(const MetricGraph& X, const VertexFunction& u,
                                        double threshold, const VertexFunction& phi) {
  const auto v = woymp_extend(X, u, threshold);
  VertexTermIdentity out;
  for (std::size_t e = 0; e < X.num_edges(); ++e) {
    const auto& edge = X.edge(e);
    if (!(u.at(edge.source) > threshold || u.at(edge.target) > threshold)) continue;
    const auto [d0, dl] = boundary_derivatives(X, v, e);
    out.edge_sum += edge.p * (dl * phi(edge.target) - d0 * phi(edge.source));
  }
  for (const VertexId x : X.vertices()) {
    if (!(u.at(x) > threshold)) {
      if (phi(x) != 0.0) {
        throw std::invalid_argument("vertex_term_identity: phi must vanish off the superlevel set");
      }
      continue;
    }
    double diff = 0.0, half = 0.0;
    for (auto e : X.incident(x)) {
      const auto& edge = X.edge(e);
      const VertexId y = edge.source == x ? edge.target : edge.source;
      diff += edge.omega * (u.at(x) - u.at(y));
      half += 0.5 * edge.omega * edge.length * edge.length;
    }
    out.vertex_sum += phi(x) * (diff + half);
  }
  out.residual = out.edge_sum - out.vertex_sum;
  return out;
}

std::string to_string(InequalityStatus s) {
  switch (s) {
    case InequalityStatus::holds:
      return "holds";
    case InequalityStatus::fails:
      return "fails";
    case InequalityStatus::inapplicable:
      return "inapplicable";
  }
  return "inapplicable";
}

WoympInequalityReport woymp_inequality_check(const WeightedGraph& g, const GraphWindow& window,
                                             const MetricGraph& X, const VertexFunction& u,
                                             double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("woymp_inequality_check: alpha must be positive");
  WoympInequalityReport rep;
  double sup = -std::numeric_limits<double>::infinity();
  for (const VertexId x : window.vertices) sup = std::max(sup, u.at(x));
  const auto check = woymp_check(g, {u, alpha, sup}, window);
  if (check.status != WoympStatus::violating) {
    rep.status = InequalityStatus::inapplicable;
    rep.reason = check.status == WoympStatus::vacuous
                     ? "superlevel set has no interior vertex"
                     : "Delta u > -alpha somewhere on the superlevel set";
    return rep;
  }
  VertexFunction scaled;
  for (const VertexId x : window.vertices) scaled.set(x, u.at(x) / alpha);
  rep.threshold = sup / alpha - 1.0;
  const auto v = woymp_extend(X, scaled, rep.threshold);
  rep.centers = check.witnesses;
  bool first = true;
  for (const VertexId x : rep.centers) {
    const auto phi = hat_function(X, x);
    const auto ibp = ibp_check(X, v, phi);
    const double margin = -measure_integral(X, phi) - ibp.energy;
    rep.margins.push_back(margin);
    if (first || margin < rep.worst_margin) rep.worst_margin = margin;
    rep.worst_ibp_residual = std::max(rep.worst_ibp_residual, std::abs(ibp.residual));
    first = false;
  }
  if (rep.worst_margin >= -kInequalitySlack) {
    rep.status = InequalityStatus::holds;
  } else {
    rep.status = InequalityStatus::fails;
    rep.reason = "eps_hat(v, phi) exceeds -int phi d mu_hat";
    if (!X.warnings.empty()) rep.reason += "; " + X.warnings.front();
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

/// int_0^l |alpha + beta t| dt, splitting at the root.
double abs_linear_integral(double at0, double atl, double l) {
  if (at0 * atl >= 0.0) return 0.5 * l * (std::abs(at0) + std::abs(atl));
  const double root = l * at0 / (at0 - atl);
  return 0.5 * root * std::abs(at0) + 0.5 * (l - root) * std::abs(atl);
}

}  // namespace

InterpolationReport interpolation_bounds_check(const MetricGraph& X, const VertexFunction& w) {
  InterpolationReport rep;
  const auto wh = interpolate(X, w);
  double graph_energy = 0.0;
  double metric_l1 = 0.0;
  bool first = true;
  for (std::size_t e = 0; e < X.num_edges(); ++e) {
    const auto& edge = X.edge(e);
    const double wx = w(edge.source), wy = w(edge.target);
    const double om = edge.omega, d = edge.length;
    const auto poly = wh.piece(e).polynomial();

    graph_energy += om * (wx - wy) * (wx - wy);

    const double l2_direct = om * d * (poly * poly).integrate(0.0, d);
    const double l2_formula = om * d * d * (wx * wx + wx * wy + wy * wy) / 3.0;
    rep.max_l2_residual = std::max(rep.max_l2_residual, std::abs(l2_direct - l2_formula));
    const double half = 0.5 * om * d * d * (wx * wx + wy * wy);
    if (first || half - l2_formula < rep.worst_l2_half_margin) {
      rep.worst_l2_half_margin = half - l2_formula;
    }
    first = false;

    const double l1_direct = om * d * abs_linear_integral(poly(0.0), poly(d), d);
    metric_l1 += l1_direct;
    if (wx * wy < 0.0) {
      ++rep.sign_changing_edges;
    } else {
      const double l1_formula = 0.5 * om * d * d * (std::abs(wx) + std::abs(wy));
      rep.max_l1_residual = std::max(rep.max_l1_residual, std::abs(l1_direct - l1_formula));
    }
  }
  rep.max_energy_residual = std::abs(energy_form(X, wh, wh) - graph_energy);
  if (rep.sign_changing_edges == 0) {
    double vertex_l1 = 0.0;
    for (const VertexId x : X.vertices()) vertex_l1 += std::abs(w(x)) * X.special_measure(x);
    rep.global_l1_residual = std::abs(metric_l1 - 0.5 * vertex_l1);
  }
  return rep;
}

double vertex_trace_constant(double c0) {
  if (!(c0 > 0.0)) throw std::invalid_argument("vertex_trace_constant: c0 must be positive");
  return 2.0 * c0 / std::tanh(c0);
}

double edge_sobolev_norm_sq(const MetricEdge& e, const EdgeQuadratic& f) {
  const auto p = f.polynomial();
  const auto dp = p.derivative();
  return e.p * ((p * p) + (dp * dp)).integrate(0.0, e.length);
}

SobolevReport sobolev_check(const MetricGraph& X, double c0,
                            const std::vector<IntervalSample>& samples,
                            const std::vector<PiecewisePoly>& functions) {
  SobolevReport rep;
  rep.constant = vertex_trace_constant(c0);
  bool first = true;
  for (const auto& s : samples) {
    const auto p = s.f.polynomial();
    const auto dp = p.derivative();
    const double norm = ((p * p) + (dp * dp)).integrate(0.0, s.length);
    const double sup = sup_abs(s.f, s.length);
    const double margin = norm / std::tanh(s.length) - sup * sup;
    if (first || margin < rep.worst_interval_margin) rep.worst_interval_margin = margin;
    first = false;
    ++rep.interval_samples;
    if (margin < -1e-12 * std::max(1.0, sup * sup)) ++rep.interval_violations;
  }
  bool first_trace = true, first_global = true;
  for (const auto& f : functions) {
    double lhs = 0.0, total_norm = 0.0;
    for (std::size_t e = 0; e < X.num_edges(); ++e) {
      const auto& edge = X.edge(e);
      const double norm = edge_sobolev_norm_sq(edge, f.piece(e));
      const double sup = sup_abs(f.piece(e), edge.length);
      const double bound = norm / (std::tanh(edge.length) * edge.omega * edge.length);
      const double margin = bound - sup * sup;
      if (first_trace || margin < rep.worst_trace_margin) rep.worst_trace_margin = margin;
      first_trace = false;
      ++rep.trace_checks;
      if (margin < -1e-12 * std::max(1.0, sup * sup)) ++rep.trace_violations;
      total_norm += norm;
      const double us = f.vertex_value(edge.source), ut = f.vertex_value(edge.target);
      lhs += edge.omega * edge.length * edge.length * (us * us + ut * ut);
    }
    const double margin = rep.constant * total_norm - lhs;
    if (first_global || margin < rep.worst_global_margin) rep.worst_global_margin = margin;
    first_global = false;
    ++rep.global_checks;
    if (margin < -1e-12 * std::max(1.0, lhs)) ++rep.global_violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------

void write_metric_graph(std::ostream& out, const MetricGraph& X) {
  out.precision(17);
  for (const auto& e : X.edges()) {
    out << "medge " << e.source << ' ' << e.target << ' ' << e.length << ' ' << e.p << ' '
        << e.q << '\n';
  }
}

void write_piecewise(std::ostream& out, const PiecewisePoly& f) {
  out.precision(17);
  for (std::size_t e = 0; e < f.pieces().size(); ++e) {
    const auto& p = f.piece(e);
    out << "poly " << e << ' ' << p.a << ' ' << p.b << ' ' << p.c << '\n';
  }
}

PiecewisePoly read_piecewise(std::istream& in, const MetricGraph& X) {
  std::vector<EdgeQuadratic> pieces(X.num_edges());
  std::vector<bool> seen(X.num_edges(), false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream s(line);
    std::string tag;
    if (!(s >> tag) || tag.front() == '#') continue;
    std::size_t e = 0;
    EdgeQuadratic q;
    if (tag != "poly" || !(s >> e >> q.a >> q.b >> q.c) || e >= pieces.size()) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": malformed poly record");
    }
    pieces[e] = q;
    seen[e] = true;
  }
  for (std::size_t e = 0; e < seen.size(); ++e) {
    if (!seen[e]) throw std::invalid_argument("missing poly record for edge " + std::to_string(e));
  }
  return PiecewisePoly::from_edges(X, std::move(pieces));
}

}  // namespace sclab
