#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sclab/graph.hpp"
#include "sclab/metric.hpp"
#include "sclab/metric_graph.hpp"

namespace sclab {

/// Outcome of one property suite.
struct SuiteResult {
  std::string name;
  std::string module;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// "max_residual" (worst must stay <= tolerance) or "min_margin" (worst must stay >= -tolerance)
  std::string measure = "max_residual";
  double worst = 0.0;
  double tolerance = 0.0;
  std::string note;

  bool passed() const { return cases > 0 && failures == 0; }
};

/// Default seed of the bundled corpus.
inline constexpr std::uint64_t kCorpusSeed = 42;

/**
 * One random configuration of the identity corpus: a connected random graph,
 * a metric on it (degree metric or random edge lengths), the metric graph,
 * and vertex functions u (with a superlevel threshold) and w.
 */
struct CorpusCase {
  WeightedGraph graph;
  GraphWindow window;
  MetricGraph metric_graph;
  VertexFunction u;
  double threshold = 0.0;
  VertexFunction w;
};

CorpusCase corpus_case(std::uint64_t seed, std::size_t index);

/// Largest residual of every exact identity on one corpus case.
struct IdentityResiduals {
  double ibp = 0.0;
  double vertex_terms = 0.0;
  double interpolation_energy = 0.0;
  double interpolation_l2 = 0.0;
  double interpolation_l1 = 0.0;
  double l2_half_margin = 0.0;  // min over edges, must be >= 0
  double edge_measure = 0.0;
  double boundary_derivatives = 0.0;

  double max() const;
};

IdentityResiduals identity_residuals(const CorpusCase& c);

/// Exact identities over `count` corpus cases; residual tolerance 1e-12.
SuiteResult identity_suite(std::uint64_t seed = kCorpusSeed, std::size_t count = 200,
                           double tolerance = 1e-12);

/// d <= d_l on all pairs and mu_hat(B) <= mu(B) at 16 radii, over random adapted graphs.
SuiteResult comparison_suite(std::uint64_t seed = kCorpusSeed, std::size_t count = 100);

/// Windows with Delta u <= -1 near the supremum, used by the inequality chain suite.
struct WoympWindow {
  std::string label;
  WeightedGraph graph;
  GraphWindow window;
  DistanceFn d;
  double c0 = 1.0;
  VertexFunction u;
  double alpha = 1.0;
};

std::vector<WoympWindow> woymp_windows();

/// eps_hat(v, phi_x) <= -int phi_x d mu_hat + 1e-10 for every hat function on the witnesses.
SuiteResult woymp_inequality_suite();

/// coth(l) interval bound and the vertex-trace bound on random piecewise quadratics.
SuiteResult sobolev_suite(std::uint64_t seed = kCorpusSeed, std::size_t count = 1000);

/// Every property suite, in a fixed order.
std::vector<SuiteResult> verify_all(std::uint64_t seed = kCorpusSeed);

}  // namespace sclab
