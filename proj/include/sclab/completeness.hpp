#pragma once

#include <cstdint>
#include <string>

#include "sclab/graph.hpp"
#include "sclab/metric.hpp"
#include "sclab/solver.hpp"

namespace sclab {

// ---------------------------------------------------------------------------
// Exhaustion resolvent

struct ResolventSolution {
  /// u on the window vertices (0 outside)
  VertexFunction u;
  /// u in window order
  std::vector<double> values;
  /// max_x |(Delta + lambda)u(x) - lambda| / (lambda + Deg(x))
  double residual = 0.0;
  std::size_t iterations = 0;
};

/**
 * Solves (Delta + lambda) u = lambda at every window vertex with u = 0
 * outside the window. The system matrix lambda*mu + L is a symmetric
 * diagonally dominant M-matrix; it is solved by Jacobi-preconditioned CG.
 * Throws SolverError when the residual does not reach `options.tolerance`.
 */
ResolventSolution dirichlet_resolvent(const GraphWindow& window, double lambda,
                                      const CgOptions& options = {});

/// Row-scaled residual of (Delta + lambda) u = lambda on the window.
double resolvent_residual(const GraphWindow& window, double lambda,
                          std::span<const double> u);

enum class VerdictKind { incomplete, complete_up_to_evidence };

std::string to_string(VerdictKind v);

/// Deficiency above which a stable profile is called incomplete.
inline constexpr double kDeficiencyThreshold = 1e-2;
/// Maximal change between the two largest radii for a profile to count as stable.
inline constexpr double kStabilityTolerance = 1e-3;

struct Verdict {
  VerdictKind kind = VerdictKind::complete_up_to_evidence;
  /// limit estimate from the last two radii, linear in 1/R, clamped to [0, last]
  double extrapolated = 0.0;
  /// |deficiency(R_last) - deficiency(R_prev)|, NaN with fewer than two radii
  double last_change = 0.0;
  std::string reason;
};

struct ResolventProfile {
  double lambda = 1.0;
  VertexId center = 0;
  std::vector<double> radii;
  std::vector<VertexFunction> u_values;
  std::vector<double> deficiency;
  std::vector<double> residuals;
  std::vector<std::size_t> window_sizes;
  std::vector<std::size_t> iterations;
};

struct DefectResult {
  ResolventProfile profile;
  Verdict verdict;
};

/// Applies the deficiency decision rule to a profile.
Verdict decide(const std::vector<double>& radii, const std::vector<double>& deficiency);

/**
 * Solves the Dirichlet resolvent on the balls B(x0, R) for each radius and
 * records the deficiency 1 - u(x0). Radii must be increasing.
 */
DefectResult incompleteness_defect(const WeightedGraph& g, const EdgeLengths& lengths,
                                   VertexId x0, double lambda, const std::vector<double>& radii,
                                   std::size_t ball_cap = kDefaultBallCap);

// ---------------------------------------------------------------------------
// Weak Omori-Yau certificates

struct WoympCertificate {
  VertexFunction u;
  double alpha = 1.0;
  double u_star = 0.0;
};

enum class WoympStatus { violating, not_violating, vacuous };

std::string to_string(WoympStatus s);

struct WoympResult {
  WoympStatus status = WoympStatus::vacuous;
  /// interior vertices of the superlevel set {u > u_star - alpha}
  std::vector<VertexId> witnesses;
  /// witnesses where Delta u > -alpha
  std::vector<VertexId> failures;
  /// max of Delta u over the witnesses
  double max_laplacian = 0.0;
};

/**
 * A certificate violates the weak Omori-Yau principle on the window when
 * Delta u <= -alpha at every interior vertex with u > u_star - alpha.
 */
WoympResult woymp_check(const WeightedGraph& g, const WoympCertificate& cert,
                        const GraphWindow& window);

/// nu(x) = sum_y omega(x,y) d(x,y)^2, the smallest measure keeping d adapted.
WeightedGraph::MeasureFn special_measure(const WeightedGraph& g, DistanceFn d);

// ---------------------------------------------------------------------------
// Minimal Markov chain

enum class TerminalStatus { horizon_reached, jump_cap, radius_escape };

std::string to_string(TerminalStatus s);

struct ChainOptions {
  double horizon = 10.0;
  std::uint64_t jump_cap = 100'000;
  /// escape radius measured with `lengths` from the start vertex; inf disables the check
  double radius_cap = kUnreachable;
  std::optional<EdgeLengths> lengths;
  bool record_path = true;
};

struct Trajectory {
  /// visited vertices; vertices[k] is entered at times[k] (times[0] == 0)
  std::vector<VertexId> vertices;
  std::vector<double> times;
  TerminalStatus status = TerminalStatus::horizon_reached;
  std::uint64_t jumps = 0;
  /// time of the last jump (or the horizon when it was reached)
  double final_time = 0.0;
  VertexId final_vertex = 0;
};

/**
 * Simulates the minimal chain: holding time Exp(Deg(x)), jump to y with
 * probability omega(x,y) / sum omega(x,.). The random stream is derived from
 * (seed, stream).
 */
Trajectory simulate_chain(const WeightedGraph& g, VertexId x0, const ChainOptions& options,
                          std::uint64_t seed, std::uint64_t stream = 0);

struct EnsembleSummary {
  std::size_t trajectories = 0;
  std::size_t horizon_reached = 0;
  std::size_t jump_cap = 0;
  std::size_t radius_escape = 0;
  std::vector<double> final_times;
  std::vector<std::uint64_t> jumps;

  double fraction_jump_cap() const {
    return trajectories == 0 ? 0.0 : double(jump_cap) / double(trajectories);
  }
};

/// Trajectory i uses stream i of `seed`; runs on worker_count() threads.
EnsembleSummary run_ensemble(const WeightedGraph& g, VertexId x0, ChainOptions options,
                             std::uint64_t seed, std::size_t count);

// ---------------------------------------------------------------------------
// Cut-off probe

enum class FotTrend { vanishing, decaying, not_decaying };

std::string to_string(FotTrend t);

struct FotProbe {
  std::vector<double> radii;
  std::vector<double> energies;
  FotTrend trend = FotTrend::not_decaying;
};

/// Cut-off v_R(x) = clamp((2R - d(x0,x)) / R, 0, 1).
double cutoff_value(double distance, double radius);

/**
 * epsilon(v_R, w) for each radius R, where w is finitely supported.
 * Only edges touching supp w contribute.
 */
FotProbe fot_probe(const WeightedGraph& g, VertexId x0, const std::vector<double>& radii,
                   const VertexFunction& w, const DistanceFn& d);

// ---------------------------------------------------------------------------
// Birth-death oracle

enum class OracleDecision { complete, incomplete, indeterminate };

std::string to_string(OracleDecision d);

struct OracleResult {
  OracleDecision decision = OracleDecision::indeterminate;
  /// sum_{n < terms} mu(B_n) / omega(n, n+1)
  double partial_sum = 0.0;
  /// fitted p in term_n ~ C n^{-p} over the tail
  double tail_exponent = 0.0;
};

/// Tail exponents at or above this count as summable.
inline constexpr double kOracleConvergentExponent = 1.1;
/// Tail exponents at or below this count as divergent.
inline constexpr double kOracleDivergentExponent = 1.02;

/**
 * Birth-death chain on N with masses mu(n) and weights omega(n, n+1):
 * complete iff sum_n mu({0..n}) / omega(n, n+1) diverges. The decision
 * compares the log-log slope of the terms on [terms/16, terms) against
 * the harmonic series.
 */
OracleResult nearest_neighbor_oracle(const std::function<double(std::uint64_t)>& mu_seq,
                                     const std::function<double(std::uint64_t)>& omega_seq,
                                     std::uint64_t terms = 1'000'000);

}  // namespace sclab
