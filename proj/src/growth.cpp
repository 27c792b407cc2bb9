#include "sclab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace sclab {

namespace {

constexpr double kDivergingSlope = -1.05;
constexpr double kConvergingSlope = -1.2;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool ok = false;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const double n = double(x.size());
  if (x.size() < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 1e-300)) return f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  f.ok = std::isfinite(f.slope) && std::isfinite(f.intercept);
  return f;
}

std::vector<double> equally_spaced(double r_max, std::size_t steps) {
  std::vector<double> r(steps);
  for (std::size_t k = 1; k <= steps; ++k) r[k - 1] = r_max * double(k) / double(steps);
  return r;
}

}  // namespace

VolumeProfile volume_profile(const WeightedGraph& g, const EdgeLengths& lengths, VertexId x0,
                             double r_max, std::size_t steps, std::size_t ball_cap) {
  if (steps == 0 || !(r_max > 0.0)) {
    throw std::invalid_argument("volume_profile: need r_max > 0 and steps > 0");
  }
  VolumeProfile p;
  p.center = x0;
  p.metric = "path";
  const auto sp = dijkstra_bounded(g, lengths, x0, r_max, ball_cap);
  p.truncated = sp.capped;
  // settled distances in nondecreasing order
  std::vector<std::pair<double, double>> shells;
  shells.reserve(sp.order.size());
  for (const VertexId y : sp.order) shells.emplace_back(sp.dist.at(y), g.measure(y));
  const double reliable =
      sp.capped && !shells.empty() ? shells.back().first : kUnreachable;
  std::size_t k = 0;
  double vol = 0.0;
  for (const double r : equally_spaced(r_max, steps)) {
    if (r >= reliable) break;
    while (k < shells.size() && shells[k].first <= r) vol += shells[k++].second;
    p.radii.push_back(r);
    p.volumes.push_back(vol);
  }
  return p;
}

VolumeProfile metric_volume_profile(const MetricGraph& X, VertexId x0, double r_max,
                                    std::size_t steps) {
  if (steps == 0 || !(r_max > 0.0)) {
    throw std::invalid_argument("metric_volume_profile: need r_max > 0 and steps > 0");
  }
  VolumeProfile p;
  p.center = x0;
  p.metric = "metric_graph";
  const auto from_x0 = X.vertex_distances(x0);
  for (const double r : equally_spaced(r_max, steps)) {
    p.radii.push_back(r);
    p.volumes.push_back(ball_measure(X, from_x0, r));
  }
  return p;
}

std::string to_string(GrowthTrend t) {
  switch (t) {
    case GrowthTrend::diverging_trend:
      return "diverging_trend";
    case GrowthTrend::converging_trend:
      return "converging_trend";
    case GrowthTrend::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

GrigoryanResult grigoryan_integral(const VolumeProfile& profile, double r_min) {
  GrigoryanResult res;
  std::vector<double> r, f;
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    if (profile.radii[i] < r_min) continue;
    r.push_back(profile.radii[i]);
    f.push_back(profile.radii[i] / std::max(std::log(profile.volumes[i]), 1.0));
  }
  if (r.size() < 3) return res;
  for (std::size_t i = 1; i < r.size(); ++i) res.value += 0.5 * (f[i] + f[i - 1]) * (r[i] - r[i - 1]);

  std::vector<double> lx, ly;
  for (std::size_t i = r.size() / 2; i < r.size(); ++i) {
    if (r[i] > 0.0 && f[i] > 0.0) {
      lx.push_back(std::log(r[i]));
      ly.push_back(std::log(f[i]));
    }
  }
  const auto fit = least_squares(lx, ly);
  if (!fit.ok || lx.size() < 2) return res;
  res.tail_slope = fit.slope;
  if (fit.slope >= kDivergingSlope) {
    res.diagnostic = GrowthTrend::diverging_trend;
  } else if (fit.slope <= kConvergingSlope) {
    res.diagnostic = GrowthTrend::converging_trend;
  }
  return res;
}

GrowthFit growth_fit(const VolumeProfile& profile) {
  GrowthFit out;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    if (profile.radii[i] > 0.0 && profile.volumes[i] > std::exp(1.0)) {
      lx.push_back(std::log(profile.radii[i]));
      ly.push_back(std::log(std::log(profile.volumes[i])));
    }
  }
  // tail: the larger half of the eligible points
  const std::size_t start = lx.size() / 2;
  std::vector<double> tx(lx.begin() + static_cast<std::ptrdiff_t>(start), lx.end());
  std::vector<double> ty(ly.begin() + static_cast<std::ptrdiff_t>(start), ly.end());
  out.points = tx.size();
  if (tx.size() < 5) return out;
  const auto fit = least_squares(tx, ty);
  if (!fit.ok) return out;
  out.ok = true;
  out.b = fit.slope;
  out.a = std::exp(fit.intercept);
  out.quadratic_regime = out.b <= 2.0;
  const std::size_t half = tx.size() / 2;
  const auto early = least_squares({tx.begin(), tx.begin() + static_cast<std::ptrdiff_t>(half + 1)},
                                   {ty.begin(), ty.begin() + static_cast<std::ptrdiff_t>(half + 1)});
  const auto late = least_squares({tx.begin() + static_cast<std::ptrdiff_t>(half), tx.end()},
                                  {ty.begin() + static_cast<std::ptrdiff_t>(half), ty.end()});
  out.polynomial_trend = early.ok && late.ok && late.slope < early.slope && out.b < 1.0;
  return out;
}

void write_profile_csv(std::ostream& out, const VolumeProfile& profile) {
  out.precision(17);
  out << "r,volume\n";
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    out << profile.radii[i] << ',' << profile.volumes[i] << '\n';
  }
}

}  // namespace sclab
