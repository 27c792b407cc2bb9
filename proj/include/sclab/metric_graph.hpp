#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "sclab/graph.hpp"
#include "sclab/metric.hpp"
#include "sclab/polynomial.hpp"

namespace sclab {

/// Oriented edge e = (s, t) of a metric graph, carrying the interval [0, length].
struct MetricEdge {
  VertexId source;
  VertexId target;
  double omega;   // graph weight omega(s, t)
  double length;  // l(e) = d(s, t)
  double p;       // p(e) = omega * d
  double q;       // q(e) = omega * d

  /// mu_hat(I(e)) = q(e) l(e) = omega d^2
  double measure() const { return q * length; }
};

enum class Orientation { smaller_id_first, larger_id_first };

/**
 * Metric graph attached to a weighted graph window and a metric d:
 * l = d(x, y) and p = q = omega d on every edge.
 */
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<VertexId> vertices, std::vector<MetricEdge> edges);

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<MetricEdge>& edges() const { return edges_; }
  const MetricEdge& edge(std::size_t e) const { return edges_.at(e); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_vertices() const { return vertices_.size(); }
  bool contains(VertexId x) const { return index_.count(x) != 0; }
  std::size_t local(VertexId x) const;

  /// Edge ids incident to x (either orientation).
  const std::vector<std::size_t>& incident(VertexId x) const;

  /// mu_hat(X)
  double total_measure() const;

  /// mu_special(x) = sum over incident edges of omega d^2.
  double special_measure(VertexId x) const;

  /// d_l from x0 to every vertex (window order), kUnreachable when disconnected.
  std::vector<double> vertex_distances(VertexId x0) const;

  std::vector<std::string> warnings;

 private:
  std::vector<VertexId> vertices_;
  std::vector<MetricEdge> edges_;
  std::unordered_map<VertexId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> incident_;
};

/**
 * Builds the metric graph on the window's edges. A metric that is not
 * adapted on the window is recorded in `warnings`; the construction itself
 * is defined for any metric.
 */
MetricGraph build_metric_graph(const WeightedGraph& g, const DistanceFn& d, double c0,
                               const GraphWindow& window,
                               Orientation orientation = Orientation::smaller_id_first);

struct EdgePoint {
  std::size_t edge;
  double t;
};

/// d_l(x0, pt) = min(d_l(x0, s) + t, d_l(x0, target) + l - t).
double quotient_distance(const MetricGraph& X, VertexId x0, const EdgePoint& pt);

/// Same, reusing vertex distances from vertex_distances(x0).
double quotient_distance(const MetricGraph& X, const std::vector<double>& from_x0,
                         const EdgePoint& pt);

/// mu_hat of the closed d_l-ball, with exact partial-edge coverage.
double ball_measure(const MetricGraph& X, VertexId x0, double r);
double ball_measure(const MetricGraph& X, const std::vector<double>& from_x0, double r);

struct ComparisonReport {
  /// min over checked pairs of d_l(x,y) - d(x,y)
  double worst_distance_margin = 0.0;
  std::size_t pairs_checked = 0;
  std::vector<double> radii;
  std::vector<double> graph_volumes;   // mu(B_d(x0, r))
  std::vector<double> metric_volumes;  // mu_hat(B_{d_l}(x0, r))
  /// min over radii of mu(B_d) - mu_hat(B_{d_l})
  double worst_volume_margin = 0.0;
};

/**
 * Checks d <= d_l on vertex pairs and mu_hat(B_{d_l}(x0, r)) <= mu(B_d(x0, r)).
 * All pairs are checked when there are at most `max_pairs` of them; otherwise
 * `max_pairs` pairs are drawn with `seed`.
 */
ComparisonReport compare_lemma(const GraphWindow& window, const DistanceFn& d,
                               const MetricGraph& X, VertexId x0,
                               const std::vector<double>& radii,
                               std::size_t max_pairs = 5000, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Piecewise polynomials

/// a t^2 + b t + c on [0, l(e)].
struct EdgeQuadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double t) const { return (a * t + b) * t + c; }
  double derivative(double t) const { return 2.0 * a * t + b; }
  Polynomial polynomial() const { return Polynomial::quadratic(a, b, c); }
};

/// Exact max of |f| on [0, length].
double sup_abs(const EdgeQuadratic& f, double length);

/**
 * Continuous function on a metric graph, a polynomial of degree <= 2 on
 * each edge. Quadratic pieces have leading coefficient exactly 1/2, so
 * f'' is 0 or 1 edgewise.
 */
class PiecewisePoly {
 public:
  PiecewisePoly() = default;

  /// Vertex values are read off the pieces; throws if they disagree or a is not 0 or 1/2.
  static PiecewisePoly from_edges(const MetricGraph& X, std::vector<EdgeQuadratic> pieces);

  const EdgeQuadratic& piece(std::size_t e) const { return pieces_.at(e); }
  const std::vector<EdgeQuadratic>& pieces() const { return pieces_; }
  double vertex_value(VertexId x) const { return vertex_values_.at(x); }
  const VertexFunction& vertex_values() const { return vertex_values_; }
  double operator()(const EdgePoint& pt) const { return pieces_.at(pt.edge)(pt.t); }

  /// Continuity and shape violations with respect to X (empty when valid).
  std::vector<std::string> invariant_violations(const MetricGraph& X) const;

 private:
  friend PiecewisePoly make_piecewise(const MetricGraph&, std::vector<EdgeQuadratic>,
                                      VertexFunction);
  std::vector<EdgeQuadratic> pieces_;
  VertexFunction vertex_values_;
};

/**
 * Extension of a vertex function with v = u on V: on edges meeting
 * Omega = {u > threshold} v solves v'' = 1 with the endpoint values, on the
 * other edges v is linear.
 */
PiecewisePoly woymp_extend(const MetricGraph& X, const VertexFunction& u, double threshold);

/// (v'(0), v'(l)) on edge e.
std::pair<double, double> boundary_derivatives(const MetricGraph& X, const PiecewisePoly& v,
                                               std::size_t e);

/// sum_e p(e) int_0^l f' g' dt, exactly.
double energy_form(const MetricGraph& X, const PiecewisePoly& f, const PiecewisePoly& g);

/// int f d mu_hat = sum_e q(e) int_0^l f dt.
double measure_integral(const MetricGraph& X, const PiecewisePoly& f);

/// Linear interpolation with the given vertex values (0 where w has no value).
PiecewisePoly interpolate(const MetricGraph& X, const VertexFunction& w);

/// Vertex values of f.
VertexFunction restrict_to_vertices(const MetricGraph& X, const PiecewisePoly& f);

/// Piecewise linear, 1 at x, 0 at every other vertex.
PiecewisePoly hat_function(const MetricGraph& X, VertexId x);

struct IbpTerms {
  double energy = 0.0;       // eps_hat(v, phi)
  double bulk = 0.0;         // -sum_e p int v'' phi
  double boundary = 0.0;     // sum_e p (v'(l) phi(l) - v'(0) phi(0))
  double residual = 0.0;     // energy - (bulk + boundary)
};

/// Integration by parts on every edge; phi must be piecewise linear.
IbpTerms ibp_check(const MetricGraph& X, const PiecewisePoly& v, const PiecewisePoly& phi);

struct VertexTermIdentity {
  double edge_sum = 0.0;
  double vertex_sum = 0.0;
  double residual = 0.0;
};

/**
 * Regroups sum_{e in A} p(e) (v'(l) phi(t(e)) - v'(0) phi(s(e))), A the edges
 * meeting Omega = {u > threshold}, into
 * sum_{x in Omega} phi(x) [sum_y omega (u(x) - u(y)) + 1/2 sum_y omega d^2].
 * phi is given by vertex values and must vanish off Omega.
 */
VertexTermIdentity vertex_term_identity(const MetricGraph& X, const VertexFunction& u,
                                        double threshold, const VertexFunction& phi);

enum class InequalityStatus { holds, fails, inapplicable };

std::string to_string(InequalityStatus s);

struct WoympInequalityReport {
  InequalityStatus status = InequalityStatus::inapplicable;
  std::string reason;
  /// u / alpha, normalized so that Delta u <= -1 on {u > sup u - 1}
  double threshold = 0.0;
  std::vector<VertexId> centers;
  /// per center: -int phi d mu_hat - eps_hat(v, phi), >= -1e-10 required
  std::vector<double> margins;
  double worst_margin = 0.0;
  double worst_ibp_residual = 0.0;
};

/**
 * For a certificate with Delta u <= -alpha on {u > sup u - alpha} (interior
 * vertices), extends u/alpha and checks eps_hat(v, phi_x) <= -int phi_x d mu_hat
 * for the hat functions at every interior x of the superlevel set.
 */
WoympInequalityReport woymp_inequality_check(const WeightedGraph& g, const GraphWindow& window,
                                             const MetricGraph& X, const VertexFunction& u,
                                             double alpha);

struct InterpolationReport {
  double max_energy_residual = 0.0;   // |eps_hat(w^, w^) - eps(w, w)|
  double max_l2_residual = 0.0;       // per edge: omega d int w^2 vs 1/3 formula
  double worst_l2_half_margin = 0.0;  // min of 1/2 formula - 1/3 formula
  double max_l1_residual = 0.0;       // edges without sign change
  std::size_t sign_changing_edges = 0;
  /// | ||w^||_{L1(mu_hat)} - 1/2 ||w||_{L1(mu_special)} |, only when no edge changes sign
  std::optional<double> global_l1_residual;
};

/// Exact interpolation identities on every edge of X.
InterpolationReport interpolation_bounds_check(const MetricGraph& X, const VertexFunction& w);

/// 2 sup_{t in (0, c0]} t coth t; t coth t is increasing, so this is 2 c0 coth c0.
double vertex_trace_constant(double c0);

struct IntervalSample {
  EdgeQuadratic f;
  double length;
};

struct SobolevReport {
  std::size_t interval_samples = 0;
  std::size_t interval_violations = 0;
  /// min over samples of coth(l) int (f^2 + f'^2) - sup|f|^2
  double worst_interval_margin = 0.0;
  std::size_t trace_checks = 0;
  std::size_t trace_violations = 0;
  double worst_trace_margin = 0.0;
  std::size_t global_checks = 0;
  std::size_t global_violations = 0;
  double worst_global_margin = 0.0;
  double constant = 0.0;
};

/**
 * Sobolev embedding with the optimal constant coth(l) on single intervals,
 * its weighted per-edge form, and the vertex-trace bound
 * sum_x u(x)^2 mu_special(x) <= C ||u||^2_{W^{1,2}(X)}. The global bound needs
 * every edge length <= c0.
 */
SobolevReport sobolev_check(const MetricGraph& X, double c0,
                            const std::vector<IntervalSample>& samples,
                            const std::vector<PiecewisePoly>& functions);

/// ||u||^2_{W^{1,2}(I(e))} with weight p = q = omega d.
double edge_sobolev_norm_sq(const MetricEdge& e, const EdgeQuadratic& f);

// ---------------------------------------------------------------------------
// Text formats

/// `medge <id1> <id2> <l> <p> <q>` per edge.
void write_metric_graph(std::ostream& out, const MetricGraph& X);

/// `poly <eid> <a> <b> <c>` per edge.
void write_piecewise(std::ostream& out, const PiecewisePoly& f);
PiecewisePoly read_piecewise(std::istream& in, const MetricGraph& X);

}  // namespace sclab
