#pragma once

#include <iosfwd>
#include <string>

#include "sclab/graph.hpp"
#include "sclab/metric.hpp"
#include "sclab/metric_graph.hpp"

namespace sclab {

struct VolumeProfile {
  VertexId center = 0;
  std::string metric;
  std::vector<double> radii;
  std::vector<double> volumes;
  /// set when the ball search hit its vertex cap; the profile stops early
  bool truncated = false;
};

/// mu(B_d(x0, r_k)) at r_k = k r_max / steps, k = 1..steps.
VolumeProfile volume_profile(const WeightedGraph& g, const EdgeLengths& lengths, VertexId x0,
                             double r_max, std::size_t steps,
                             std::size_t ball_cap = kDefaultBallCap);

/// mu_hat(B_{d_l}(x0, r_k)) on a metric graph, same radii as volume_profile.
VolumeProfile metric_volume_profile(const MetricGraph& X, VertexId x0, double r_max,
                                    std::size_t steps);

enum class GrowthTrend { diverging_trend, converging_trend, indeterminate };

std::string to_string(GrowthTrend t);

struct GrigoryanResult {
  double value = 0.0;
  GrowthTrend diagnostic = GrowthTrend::indeterminate;
  /// log-log slope of the integrand r / max(log V, 1) on the tail half
  double tail_slope = 0.0;
};

/**
 * Trapezoid value of int r / max(log V(r), 1) dr over the profile points
 * with r >= r_min. The tail diagnostic is heuristic: an integrand decaying
 * no faster than 1/r reads as diverging.
 */
GrigoryanResult grigoryan_integral(const VolumeProfile& profile, double r_min);

struct GrowthFit {
  bool ok = false;
  double a = 0.0;
  double b = 0.0;
  /// b <= 2: log-volume grows at most quadratically
  bool quadratic_regime = false;
  /// local exponent falls along the tail, as for polynomial volume
  bool polynomial_trend = false;
  std::size_t points = 0;
};

/// Least-squares fit of log V ~ a r^b over the tail points with V > e.
GrowthFit growth_fit(const VolumeProfile& profile);

/// `r,volume` rows with a header line.
void write_profile_csv(std::ostream& out, const VolumeProfile& profile);

}  // namespace sclab
