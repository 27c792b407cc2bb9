#include "sclab/completeness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "sclab/parallel.hpp"
#include "sclab/rng.hpp"

namespace sclab {

namespace {

std::vector<double> total_weights(const GraphWindow& w) {
  std::vector<double> tot = w.exterior_weight;
  for (const auto& e : w.edges) {
    tot[e.a] += e.weight;
    tot[e.b] += e.weight;
  }
  return tot;
}

}  // namespace

double resolvent_residual(const GraphWindow& window, double lambda, std::span<const double> u) {
  const auto tot = total_weights(window);
  std::vector<double> lu(window.size(), 0.0);
  for (std::size_t i = 0; i < window.size(); ++i) lu[i] = tot[i] * u[i];
  for (const auto& e : window.edges) {
    lu[e.a] -= e.weight * u[e.b];
    lu[e.b] -= e.weight * u[e.a];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const double mu = window.mu[i];
    const double r = lu[i] / mu + lambda * u[i] - lambda;
    worst = std::max(worst, std::abs(r) / (lambda + tot[i] / mu));
  }
  return worst;
}

ResolventSolution dirichlet_resolvent(const GraphWindow& window, double lambda,
                                      const CgOptions& options) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dirichlet_resolvent: lambda must be positive");
  const std::size_t n = window.size();
  const auto tot = total_weights(window);
  std::vector<CsrMatrix::Triplet> trips;
  trips.reserve(n + 2 * window.edges.size());
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    trips.push_back({i, i, lambda * window.mu[i] + tot[i]});
    rhs[i] = lambda * window.mu[i];
  }
  for (const auto& e : window.edges) {
    trips.push_back({e.a, e.b, -e.weight});
    trips.push_back({e.b, e.a, -e.weight});
  }
  const CsrMatrix a(n, std::move(trips));
  auto cg = conjugate_gradient(a, rhs, options);
  if (!cg.converged) {
    throw SolverError("dirichlet_resolvent: CG did not converge after " +
                          std::to_string(cg.iterations) + " iterations (scaled residual " +
                          std::to_string(cg.scaled_residual) + ")",
                      cg.scaled_residual);
  }
  ResolventSolution sol;
  sol.values = std::move(cg.x);
  sol.iterations = cg.iterations;
  sol.residual = resolvent_residual(window, lambda, sol.values);
  for (std::size_t i = 0; i < n; ++i) sol.u.set(window.vertices[i], sol.values[i]);
  return sol;
}

std::string to_string(VerdictKind v) {
  return v == VerdictKind::incomplete ? "incomplete" : "complete_up_to_evidence";
}

Verdict decide(const std::vector<double>& radii, const std::vector<double>& deficiency) {
  Verdict v;
  if (deficiency.empty()) {
    v.reason = "empty profile";
    v.last_change = std::nan("");
    return v;
  }
  const double last = deficiency.back();
  if (deficiency.size() < 2) {
    v.extrapolated = last;
    v.last_change = std::nan("");
    v.reason = "a single radius cannot show stabilization";
    return v;
  }
  const std::size_t k = deficiency.size();
  const double r1 = radii[k - 2], r2 = radii[k - 1];
  const double d1 = deficiency[k - 2], d2 = last;
  v.last_change = std::abs(d2 - d1);
  // d(R) ~ d_inf + c / R
  double extrap = (r2 * d2 - r1 * d1) / (r2 - r1);
  v.extrapolated = std::clamp(extrap, 0.0, std::max(0.0, last));
  const bool large = v.extrapolated > kDeficiencyThreshold;
  const bool stable = v.last_change < kStabilityTolerance;
  if (large && stable) {
    v.kind = VerdictKind::incomplete;
    v.reason = "deficiency stabilized at a positive value";
  } else if (!large) {
    v.reason = "extrapolated deficiency below threshold";
  } else {
    v.reason = "deficiency still changing between the two largest radii";
  }
  return v;
}

DefectResult incompleteness_defect(const WeightedGraph& g, const EdgeLengths& lengths,
                                   VertexId x0, double lambda, const std::vector<double>& radii,
                                   std::size_t ball_cap) {
  if (!std::is_sorted(radii.begin(), radii.end())) {
    throw std::invalid_argument("incompleteness_defect: radii must be increasing");
  }
  const std::size_t k = radii.size();
  std::vector<ResolventSolution> sols(k);
  std::vector<std::size_t> sizes(k);
  parallel_for(k, [&](std::size_t i) {
    const auto window = ball_window(g, lengths, x0, radii[i], ball_cap);
    sizes[i] = window.size();
    sols[i] = dirichlet_resolvent(window, lambda);
  });
  DefectResult out;
  auto& p = out.profile;
  p.lambda = lambda;
  p.center = x0;
  p.radii = radii;
  for (std::size_t i = 0; i < k; ++i) {
    p.deficiency.push_back(1.0 - sols[i].u.at(x0));
    p.residuals.push_back(sols[i].residual);
    p.iterations.push_back(sols[i].iterations);
    p.window_sizes.push_back(sizes[i]);
    p.u_values.push_back(std::move(sols[i].u));
  }
  out.verdict = decide(p.radii, p.deficiency);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(WoympStatus s) {
  switch (s) {
    case WoympStatus::violating:
      return "violating";
    case WoympStatus::not_violating:
      return "not_violating";
    case WoympStatus::vacuous:
      return "vacuous";
  }
  return "vacuous";
}

WoympResult woymp_check(const WeightedGraph& g, const WoympCertificate& cert,
                        const GraphWindow& window) {
  if (!(cert.alpha > 0.0)) throw std::invalid_argument("woymp_check: alpha must be positive");
  WoympResult res;
  bool first = true;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const VertexId x = window.vertices[i];
    const double ux = cert.u.at(x);
    if (ux > cert.u_star) {
      throw std::invalid_argument("woymp_check: u(" + std::to_string(x) +
                                  ") exceeds u_star");
    }
    if (!window.interior[i] || !(ux > cert.u_star - cert.alpha)) continue;
    res.witnesses.push_back(x);
    const double lap = formal_laplacian(g, cert.u, x);
    if (first || lap > res.max_laplacian) res.max_laplacian = lap;
    first = false;
    if (lap > -cert.alpha) res.failures.push_back(x);
  }
  if (res.witnesses.empty()) {
    res.status = WoympStatus::vacuous;
  } else {
    res.status = res.failures.empty() ? WoympStatus::violating : WoympStatus::not_violating;
  }
  return res;
}

WeightedGraph::MeasureFn special_measure(const WeightedGraph& g, DistanceFn d) {
  auto base = std::make_shared<WeightedGraph>(g);
  return [base, d = std::move(d)](VertexId x) {
    double s = 0.0;
    for (const auto& n : base->neighbors(x)) {
      const double dxy = d(x, n.id);
      s += n.weight * dxy * dxy;
    }
    return s;
  };
}

// ---------------------------------------------------------------------------

std::string to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::horizon_reached:
      return "horizon_reached";
    case TerminalStatus::jump_cap:
      return "jump_cap";
    case TerminalStatus::radius_escape:
      return "radius_escape";
  }
  return "horizon_reached";
}

namespace {

struct JumpTable {
  std::vector<VertexId> targets;
  std::vector<double> cumulative;
  double rate = 0.0;
};

struct ChainContext {
  const WeightedGraph& g;
  std::shared_ptr<const std::unordered_map<VertexId, double>> ball;
};

Trajectory simulate_impl(const ChainContext& ctx, VertexId x0, const ChainOptions& opt,
                         std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 rng(seed, stream);
  std::unordered_map<VertexId, JumpTable> tables;
  auto table_for = [&](VertexId x) -> const JumpTable& {
    auto it = tables.find(x);
    if (it != tables.end()) return it->second;
    JumpTable t;
    double total = 0.0;
    for (const auto& n : ctx.g.neighbors(x)) {
      total += n.weight;
      t.targets.push_back(n.id);
      t.cumulative.push_back(total);
    }
    t.rate = total / ctx.g.measure(x);
    return tables.emplace(x, std::move(t)).first->second;
  };

  Trajectory tr;
  VertexId x = x0;
  double time = 0.0;
  if (opt.record_path) {
    tr.vertices.push_back(x);
    tr.times.push_back(0.0);
  }
  while (true) {
    if (ctx.ball && ctx.ball->count(x) == 0) {
      tr.status = TerminalStatus::radius_escape;
      break;
    }
    if (tr.jumps >= opt.jump_cap) {
      tr.status = TerminalStatus::jump_cap;
      break;
    }
    const JumpTable& t = table_for(x);
    if (t.rate <= 0.0) {
      time = opt.horizon;
      tr.status = TerminalStatus::horizon_reached;
      break;
    }
    const double hold = -std::log(rng.uniform_open()) / t.rate;
    if (time + hold > opt.horizon) {
      time = opt.horizon;
      tr.status = TerminalStatus::horizon_reached;
      break;
    }
    time += hold;
    const double pick = rng.uniform_open() * t.cumulative.back();
    auto it = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), pick);
    if (it == t.cumulative.end()) --it;
    x = t.targets[static_cast<std::size_t>(it - t.cumulative.begin())];
    ++tr.jumps;
    if (opt.record_path) {
      tr.vertices.push_back(x);
      tr.times.push_back(time);
    }
  }
  tr.final_time = time;
  tr.final_vertex = x;
  return tr;
}

std::shared_ptr<const std::unordered_map<VertexId, double>> escape_ball(
    const WeightedGraph& g, VertexId x0, const ChainOptions& opt) {
  if (!std::isfinite(opt.radius_cap)) return nullptr;
  if (!opt.lengths) {
    throw std::invalid_argument("simulate_chain: a finite radius cap needs edge lengths");
  }
  auto sp = dijkstra(g, *opt.lengths, x0, opt.radius_cap);
  return std::make_shared<const std::unordered_map<VertexId, double>>(std::move(sp.dist));
}

void check_options(const ChainOptions& opt) {
  if (!(opt.horizon > 0.0) || opt.jump_cap == 0 || !(opt.radius_cap > 0.0)) {
    throw std::invalid_argument("simulate_chain: caps must be positive");
  }
}

}  // namespace

Trajectory simulate_chain(const WeightedGraph& g, VertexId x0, const ChainOptions& options,
                          std::uint64_t seed, std::uint64_t stream) {
  check_options(options);
  const ChainContext ctx{g, escape_ball(g, x0, options)};
  return simulate_impl(ctx, x0, options, seed, stream);
}

EnsembleSummary run_ensemble(const WeightedGraph& g, VertexId x0, ChainOptions options,
                             std::uint64_t seed, std::size_t count) {
  check_options(options);
  options.record_path = false;
  const ChainContext ctx{g, escape_ball(g, x0, options)};
  std::vector<Trajectory> runs(count);
  parallel_for(count, [&](std::size_t i) { runs[i] = simulate_impl(ctx, x0, options, seed, i); });
  EnsembleSummary s;
  s.trajectories = count;
  for (const auto& r : runs) {
    switch (r.status) {
      case TerminalStatus::horizon_reached:
        ++s.horizon_reached;
        break;
      case TerminalStatus::jump_cap:
        ++s.jump_cap;
        break;
      case TerminalStatus::radius_escape:
        ++s.radius_escape;
        break;
    }
    s.final_times.push_back(r.final_time);
    s.jumps.push_back(r.jumps);
  }
  return s;
}

// ---------------------------------------------------------------------------

std::string to_string(FotTrend t) {
  switch (t) {
    case FotTrend::vanishing:
      return "vanishing";
    case FotTrend::decaying:
      return "decaying";
    case FotTrend::not_decaying:
      return "not_decaying";
  }
  return "not_decaying";
}

double cutoff_value(double distance, double radius) {
  if (!std::isfinite(distance)) return 0.0;
  return std::clamp((2.0 * radius - distance) / radius, 0.0, 1.0);
}

FotProbe fot_probe(const WeightedGraph& g, VertexId x0, const std::vector<double>& radii,
                   const VertexFunction& w, const DistanceFn& d) {
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("fot_probe: radii must be positive");
  }
  const auto supp = w.support();
  const std::set<VertexId> in_supp(supp.begin(), supp.end());
  // every vertex whose cut-off value can matter, with its distance to x0
  std::map<VertexId, double> dist;
  std::vector<std::pair<VertexId, std::vector<Neighbor>>> stars;
  for (const VertexId x : supp) {
    dist.emplace(x, d(x0, x));
    auto nbrs = g.neighbors(x);
    for (const auto& n : nbrs) {
      if (!dist.count(n.id)) dist.emplace(n.id, d(x0, n.id));
    }
    stars.emplace_back(x, std::move(nbrs));
  }
  FotProbe probe;
  probe.radii = radii;
  for (const double r : radii) {
    double e = 0.0;
    for (const auto& [x, nbrs] : stars) {
      const double vx = cutoff_value(dist.at(x), r);
      for (const auto& n : nbrs) {
        if (in_supp.count(n.id) != 0 && n.id < x) continue;
        e += n.weight * (vx - cutoff_value(dist.at(n.id), r)) * (w(x) - w(n.id));
      }
    }
    probe.energies.push_back(e);
  }
  if (!probe.energies.empty()) {
    bool nonincreasing = true;
    for (std::size_t i = 1; i < probe.energies.size(); ++i) {
      if (std::abs(probe.energies[i]) > std::abs(probe.energies[i - 1]) + 1e-15) {
        nonincreasing = false;
      }
    }
    const double first = std::abs(probe.energies.front());
    const double last = std::abs(probe.energies.back());
    if (last <= 1e-12) {
      probe.trend = FotTrend::vanishing;
    } else if (nonincreasing && last < first) {
      probe.trend = FotTrend::decaying;
    } else {
      probe.trend = FotTrend::not_decaying;
    }
  }
  return probe;
}

// ---------------------------------------------------------------------------

std::string to_string(OracleDecision d) {
  switch (d) {
    case OracleDecision::complete:
      return "complete";
    case OracleDecision::incomplete:
      return "incomplete";
    case OracleDecision::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

OracleResult nearest_neighbor_oracle(const std::function<double(std::uint64_t)>& mu_seq,
                                     const std::function<double(std::uint64_t)>& omega_seq,
                                     std::uint64_t terms) {
  if (terms < 64) throw std::invalid_argument("nearest_neighbor_oracle: need at least 64 terms");
  OracleResult res;
  double ball = 0.0;
  const std::uint64_t tail_start = terms / 16;
  // least squares of log(term) on log(n) over the tail
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::uint64_t n = 0; n < terms; ++n) {
    ball += mu_seq(n);
    const double term = ball / omega_seq(n);
    res.partial_sum += term;
    if (n >= tail_start && term > 0.0) {
      const double lx = std::log(double(n + 1));
      const double ly = std::log(term);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++m;
    }
  }
  const double denom = double(m) * sxx - sx * sx;
  if (m < 2 || denom <= 0.0) {
    res.decision = OracleDecision::indeterminate;
    return res;
  }
  const double slope = (double(m) * sxy - sx * sy) / denom;
  res.tail_exponent = -slope;
  if (!std::isfinite(res.partial_sum) || res.tail_exponent <= kOracleDivergentExponent) {
    res.decision = OracleDecision::complete;
  } else if (res.tail_exponent >= kOracleConvergentExponent) {
    res.decision = OracleDecision::incomplete;
  } else {
    res.decision = OracleDecision::indeterminate;
  }
  return res;
}

}  // namespace sclab
