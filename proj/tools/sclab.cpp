#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sclab/completeness.hpp"
#include "sclab/families.hpp"
#include "sclab/graph_io.hpp"
#include "sclab/growth.hpp"
#include "sclab/metric_graph.hpp"
#include "sclab/rng.hpp"
#include "sclab/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace sclab;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWarning = 2;

/// Bad arguments or inputs; reported on stderr with exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (const double x : v) a.push_back(number(x));
  return a;
}

// ---------------------------------------------------------------------------
// Inputs

struct InputOptions {
  std::string graph_file;
  std::string metric_file;
  std::string family;
  std::optional<double> alpha;
  std::vector<std::string> params;
  std::string metric_kind;
  std::optional<double> c0;
  VertexId center = 0;
  std::optional<double> radius;
};

struct Input {
  std::optional<WeightedGraph> graph;
  std::optional<MetricFile> metric;
  std::string family;
  std::map<std::string, double> family_params;
  std::string fingerprint;
  json description;

  const WeightedGraph& g() const { return *graph; }
};

std::map<std::string, double> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& p : raw) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + p + "'");
    const std::string key = p.substr(0, eq), val = p.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      out[key] = v;
    } catch (const std::exception&) {
      throw UsageError("--param " + key + ": not a number: '" + val + "'");
    }
  }
  return out;
}

double param_or(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

WeightedGraph make_family(const std::string& kind, std::map<std::string, double>& p) {
  const std::map<std::string, std::vector<std::string>> known = {
      {"birth_death", {"alpha"}},
      {"anti_tree", {"a", "depth_cap"}},
      {"lattice2d", {}},
      {"random_graph", {"n", "p", "seed", "weight_lo", "weight_hi", "mu_lo", "mu_hi"}},
      {"random_tree", {"n", "seed", "weight_lo", "weight_hi", "mu_lo", "mu_hi"}},
  };
  auto it = known.find(kind);
  if (it == known.end()) {
    throw UsageError("unknown family '" + kind +
                     "' (birth_death, anti_tree, lattice2d, random_graph, random_tree)");
  }
  for (const auto& [key, _] : p) {
    if (std::find(it->second.begin(), it->second.end(), key) == it->second.end()) {
      throw UsageError("family " + kind + " has no parameter '" + key + "'");
    }
  }
  if (kind == "birth_death") {
    p.emplace("alpha", 1.0);
    return birth_death(p["alpha"]);
  }
  if (kind == "anti_tree") {
    p.emplace("a", 3.0);
    p.emplace("depth_cap", 64.0);
    return anti_tree(p["a"], std::size_t(p["depth_cap"]));
  }
  if (kind == "lattice2d") return lattice2d();
  RandomGraphSpec spec;
  spec.n = std::size_t(param_or(p, "n", double(spec.n)));
  spec.edge_prob = param_or(p, "p", spec.edge_prob);
  spec.seed = std::uint64_t(param_or(p, "seed", 0.0));
  spec.weight_lo = param_or(p, "weight_lo", spec.weight_lo);
  spec.weight_hi = param_or(p, "weight_hi", spec.weight_hi);
  spec.mu_lo = param_or(p, "mu_lo", spec.mu_lo);
  spec.mu_hi = param_or(p, "mu_hi", spec.mu_hi);
  p["n"] = double(spec.n);
  p["seed"] = double(spec.seed);
  if (kind == "random_graph") {
    p["p"] = spec.edge_prob;
    return random_graph(spec);
  }
  return random_tree(spec);
}

Input load_input(const InputOptions& o) {
  Input in;
  if (o.graph_file.empty() == o.family.empty()) {
    throw UsageError("give exactly one of --graph FILE or --family KIND");
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  if (!o.graph_file.empty()) {
    const std::string text = slurp(o.graph_file);
    std::istringstream s(text);
    try {
      in.graph = read_graph(s);
    } catch (const ParseError& e) {
      throw UsageError(o.graph_file + ": " + e.what());
    }
    h = fnv1a(text, h);
    in.description = {{"graph", o.graph_file}};
  } else {
    in.family = o.family;
    in.family_params = parse_params(o.params);
    if (o.alpha) in.family_params[o.family == "anti_tree" ? "a" : "alpha"] = *o.alpha;
    in.graph = make_family(o.family, in.family_params);
    std::string canon = "family:" + o.family;
    json params = json::object();
    for (const auto& [k, v] : in.family_params) {
      std::ostringstream s;
      s.precision(17);
      s << ';' << k << '=' << v;
      canon += s.str();
      params[k] = v;
    }
    h = fnv1a(canon, h);
    in.description = {{"family", o.family}, {"params", params}};
  }
  if (!o.metric_file.empty()) {
    const std::string text = slurp(o.metric_file);
    std::istringstream s(text);
    try {
      in.metric = read_metric(s);
    } catch (const ParseError& e) {
      throw UsageError(o.metric_file + ": " + e.what());
    }
    h = fnv1a("\x1fmetric\x1f", h);
    h = fnv1a(text, h);
    in.description["metric"] = o.metric_file;
  }
  in.fingerprint = "fnv1a64:" + hex64(h);
  return in;
}

struct ChosenMetric {
  EdgeLengths lengths;
  std::string name;
};

ChosenMetric choose_metric(const Input& in, const InputOptions& o, const std::string& fallback) {
  if (in.metric) {
    if (!o.metric_kind.empty()) throw UsageError("--metric and --metric-kind are exclusive");
    return {in.metric->edge_lengths(o.c0.value_or(1.0)), "file"};
  }
  const std::string kind = o.metric_kind.empty() ? fallback : o.metric_kind;
  const double c0 = o.c0.value_or(1.0);
  if (!(c0 > 0.0)) throw UsageError("--c0 must be positive");
  if (kind == "degree") return {degree_metric(in.g(), c0), "degree"};
  if (kind == "graph") return {unit_lengths(c0), "graph"};
  throw UsageError("--metric-kind must be 'degree' or 'graph'");
}

/// Whole graph for finite inputs without --radius; otherwise the graph-metric ball.
GraphWindow analysis_window(const Input& in, const InputOptions& o, double default_radius) {
  if (in.g().is_finite() && !o.radius) return whole_graph_window(in.g());
  const double r = o.radius.value_or(default_radius);
  if (!(r >= 0.0)) throw UsageError("--radius must be non-negative");
  return ball_window(in.g(), unit_lengths(), o.center, r);
}

json window_json(const GraphWindow& w, const Input& in, const InputOptions& o,
                 double default_radius) {
  json j = {{"vertices", w.size()},
            {"interior", w.interior_vertices().size()},
            {"edges", w.edges.size()}};
  if (!(in.g().is_finite() && !o.radius)) {
    j["center"] = o.center;
    j["radius"] = o.radius.value_or(default_radius);
  }
  return j;
}

void add_input_options(CLI::App* app, InputOptions& o, bool with_window) {
  app->add_option("--graph", o.graph_file, "Graph file (vertex/edge records)");
  app->add_option("--family", o.family,
                  "Generated family: birth_death, anti_tree, lattice2d, random_graph, random_tree");
  app->add_option("--alpha", o.alpha, "Family exponent (birth_death alpha, anti_tree a)");
  app->add_option("--param", o.params, "Family parameter key=value (repeatable)");
  app->add_option("--metric", o.metric_file, "Metric file (len/c0 records)");
  app->add_option("--metric-kind", o.metric_kind, "Built-in metric: degree or graph");
  app->add_option("--c0", o.c0, "Jump size c0 (default 1)");
  app->add_option("--center", o.center, "Center vertex id");
  if (with_window) {
    app->add_option("--radius", o.radius, "Window radius in the graph metric");
  }
}

// ---------------------------------------------------------------------------
// Report plumbing

struct Common {
  std::string out;
  std::uint64_t seed = 0;
  bool timings = false;
};

json report_head(const std::string& command, const Input* in) {
  json r;
  r["schema"] = 1;
  r["tool"] = "sclab";
  r["version"] = SCLAB_VERSION;
  r["command"] = command;
  if (in) r["input"] = {{"fingerprint", in->fingerprint}, {"source", in->description}};
  return r;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

void emit_report(const Common& c, json report, std::chrono::steady_clock::time_point start) {
  if (c.timings) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report["timings"] = {{"wall_seconds", secs}};
  }
  emit(c.out, report.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Commands

int cmd_check_adapted(const InputOptions& o, const Common& c, std::chrono::steady_clock::time_point t0) {
  const auto in = load_input(o);
  const auto metric = choose_metric(in, o, "degree");
  const auto window = analysis_window(in, o, 8.0);
  const PathMetric d(in.g(), metric.lengths);
  const auto rep = check_adapted(in.g(), d.as_function(), metric.lengths.c0, window);
  const auto violations = validate(in.g(), window);

  json r = report_head("check-adapted", &in);
  r["params"] = {{"metric", metric.name}, {"c0", metric.lengths.c0}};
  r["window"] = window_json(window, in, o, 8.0);
  json a = {{"verdict", to_string(rep.verdict)},
            {"max_sum", rep.max_sum},
            {"argmax", rep.argmax ? json(*rep.argmax) : json(nullptr)},
            {"max_edge_distance", rep.max_edge_distance},
            {"longest_edge", rep.longest_edge
                                 ? json::array({rep.longest_edge->first, rep.longest_edge->second})
                                 : json(nullptr)},
            {"vertices_checked", rep.vertices_checked}};
  r["adaptedness"] = a;
  json v = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(violations.size(), 20); ++i) {
    v.push_back({{"kind", violations[i].kind}, {"message", violations[i].message}});
  }
  r["validation"] = {{"violations", violations.size()}, {"first", v}};
  json warnings = json::array();
  if (rep.verdict != Adaptedness::adapted) warnings.push_back("metric is " + to_string(rep.verdict));
  if (!violations.empty()) warnings.push_back("graph failed validation");
  r["warnings"] = warnings;
  emit_report(c, r, t0);
  return warnings.empty() ? kExitOk : kExitWarning;
}

int cmd_resolvent(const InputOptions& o, const Common& c, double lambda,
                  const std::vector<double>& radii, std::size_t ball_cap,
                  std::chrono::steady_clock::time_point t0) {
  if (radii.empty()) throw UsageError("--radii is required");
  if (!(lambda > 0.0)) throw UsageError("--lambda must be positive");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && radii[i] <= radii[i - 1])) {
      throw UsageError("--radii must be positive and increasing");
    }
  }
  const auto in = load_input(o);
  const auto metric = choose_metric(in, o, "graph");
  const auto res = incompleteness_defect(in.g(), metric.lengths, o.center, lambda, radii, ball_cap);

  json r = report_head("resolvent", &in);
  r["params"] = {{"metric", metric.name}, {"center", o.center}, {"ball_cap", ball_cap}};
  r["lambda"] = lambda;
  r["radii"] = numbers(radii);
  r["deficiency"] = numbers(res.profile.deficiency);
  r["verdict"] = to_string(res.verdict.kind);
  r["seed"] = c.seed;
  r["residuals"] = numbers(res.profile.residuals);
  r["window_sizes"] = res.profile.window_sizes;
  r["iterations"] = res.profile.iterations;
  r["decision"] = {{"extrapolated", number(res.verdict.extrapolated)},
                   {"last_change", number(res.verdict.last_change)},
                   {"deficiency_threshold", kDeficiencyThreshold},
                   {"stability_tolerance", kStabilityTolerance},
                   {"reason", res.verdict.reason}};
  json warnings = json::array();
  if (in.family == "birth_death") {
    const double alpha = in.family_params.at("alpha");
    const auto oracle = nearest_neighbor_oracle(
        [](std::uint64_t) { return 1.0; },
        [alpha](std::uint64_t n) { return std::pow(double(n + 1), alpha); });
    r["oracle"] = {{"decision", to_string(oracle.decision)},
                   {"partial_sum", oracle.partial_sum},
                   {"tail_exponent", oracle.tail_exponent}};
    const bool mismatch =
        (oracle.decision == OracleDecision::incomplete && res.verdict.kind != VerdictKind::incomplete) ||
        (oracle.decision == OracleDecision::complete && res.verdict.kind == VerdictKind::incomplete);
    if (mismatch) warnings.push_back("resolvent verdict disagrees with the summability oracle");
  }
  r["warnings"] = warnings;
  emit_report(c, r, t0);
  return warnings.empty() ? kExitOk : kExitWarning;
}

struct SimulateArgs {
  std::size_t trajectories = 1000;
  double horizon = 10.0;
  std::uint64_t jump_cap = 100'000;
  std::optional<double> radius_cap;
  bool per_trajectory = false;
};

int cmd_simulate(const InputOptions& o, const Common& c, const SimulateArgs& a,
                 std::chrono::steady_clock::time_point t0) {
  if (a.trajectories == 0) throw UsageError("--trajectories must be positive");
  const auto in = load_input(o);
  ChainOptions opt;
  opt.horizon = a.horizon;
  opt.jump_cap = a.jump_cap;
  std::string metric_name;
  if (a.radius_cap) {
    const auto metric = choose_metric(in, o, "graph");
    opt.radius_cap = *a.radius_cap;
    opt.lengths = metric.lengths;
    metric_name = metric.name;
  }
  const auto s = run_ensemble(in.g(), o.center, opt, c.seed, a.trajectories);

  json r = report_head("simulate", &in);
  r["params"] = {{"center", o.center},
                 {"trajectories", a.trajectories},
                 {"horizon", a.horizon},
                 {"jump_cap", a.jump_cap},
                 {"radius_cap", a.radius_cap ? number(*a.radius_cap) : json(nullptr)},
                 {"metric", a.radius_cap ? json(metric_name) : json(nullptr)},
                 {"seed", c.seed}};
  double time_sum = 0.0, jump_sum = 0.0;
  std::uint64_t jump_max = 0;
  for (std::size_t i = 0; i < s.trajectories; ++i) {
    time_sum += s.final_times[i];
    jump_sum += double(s.jumps[i]);
    jump_max = std::max(jump_max, s.jumps[i]);
  }
  const double n = double(s.trajectories);
  r["monte_carlo"] = {{"counts",
                       {{"horizon_reached", s.horizon_reached},
                        {"jump_cap", s.jump_cap},
                        {"radius_escape", s.radius_escape}}},
                      {"fraction_jump_cap", s.fraction_jump_cap()},
                      {"fraction_radius_escape", double(s.radius_escape) / n},
                      {"mean_final_time", time_sum / n},
                      {"mean_jumps", jump_sum / n},
                      {"max_jumps", jump_max}};
  if (a.per_trajectory) {
    r["monte_carlo"]["final_times"] = numbers(s.final_times);
    r["monte_carlo"]["jumps"] = s.jumps;
  }
  emit_report(c, r, t0);
  return kExitOk;
}

struct MetricVerifyArgs {
  std::size_t steps = 16;
  std::string dump_metric_graph;
  std::string dump_extension;
};

int cmd_metric_verify(const InputOptions& o, const Common& c, const MetricVerifyArgs& a,
                      std::chrono::steady_clock::time_point t0) {
  if (a.steps == 0) throw UsageError("--steps must be positive");
  const auto in = load_input(o);
  const auto metric = choose_metric(in, o, "degree");
  const auto window = analysis_window(in, o, 4.0);
  const PathMetric pm(in.g(), metric.lengths);
  const auto d = pm.as_function();
  const double c0 = metric.lengths.c0;
  const auto X = build_metric_graph(in.g(), d, c0, window);
  if (!X.contains(o.center)) throw UsageError("center " + std::to_string(o.center) + " not in window");

  double reach = 0.0;
  for (const double r : X.vertex_distances(o.center)) {
    if (std::isfinite(r)) reach = std::max(reach, r);
  }
  std::vector<double> radii;
  for (std::size_t k = 1; k <= a.steps; ++k) radii.push_back(1.1 * reach * double(k) / double(a.steps));
  const auto cmp = compare_lemma(window, d, X, o.center, radii, 5000, c.seed);

  SplitMix64 rng(c.seed, 0xA11CE);
  CorpusCase cc{in.g(), window, X, {}, 0.0, {}};
  for (const VertexId x : window.vertices) {
    cc.u.set(x, 2.0 * rng.uniform_open() - 1.0);
    cc.w.set(x, 2.0 * rng.uniform_open() - 1.0);
  }
  cc.threshold = 0.0;
  const auto ids = identity_residuals(cc);
  const auto interp = interpolation_bounds_check(X, cc.w);
  const auto v = woymp_extend(X, cc.u, cc.threshold);

  double longest = 0.0;
  for (const auto& e : X.edges()) longest = std::max(longest, e.length);
  std::optional<SobolevReport> sob;
  if (longest <= c0) sob = sobolev_check(X, c0, {}, {v, interpolate(X, cc.w)});

  json r = report_head("metric-verify", &in);
  r["params"] = {{"metric", metric.name}, {"c0", c0}, {"center", o.center}, {"seed", c.seed},
                 {"steps", a.steps}};
  r["window"] = window_json(window, in, o, 4.0);
  r["metric_graph"] = {{"vertices", X.num_vertices()},
                       {"edges", X.num_edges()},
                       {"total_measure", X.total_measure()},
                       {"longest_edge", longest},
                       {"warnings", X.warnings}};
  r["comparison_lemma"] = {{"pairs_checked", cmp.pairs_checked},
                           {"worst_distance_margin", cmp.worst_distance_margin},
                           {"radii", numbers(cmp.radii)},
                           {"graph_volumes", numbers(cmp.graph_volumes)},
                           {"metric_volumes", numbers(cmp.metric_volumes)},
                           {"worst_volume_margin", cmp.worst_volume_margin}};
  r["identity_residuals"] = {{"ibp", ids.ibp},
                             {"vertex_terms", ids.vertex_terms},
                             {"interpolation_energy", ids.interpolation_energy},
                             {"interpolation_l2", ids.interpolation_l2},
                             {"interpolation_l1", ids.interpolation_l1},
                             {"edge_measure", ids.edge_measure},
                             {"boundary_derivatives", ids.boundary_derivatives},
                             {"max", ids.max()}};
  r["interpolation"] = {{"worst_l2_half_margin", interp.worst_l2_half_margin},
                        {"sign_changing_edges", interp.sign_changing_edges}};
  if (sob) {
    r["sobolev"] = {{"constant", sob->constant},
                    {"trace_checks", sob->trace_checks},
                    {"trace_violations", sob->trace_violations},
                    {"global_violations", sob->global_violations},
                    {"worst_global_margin", sob->worst_global_margin}};
  } else {
    r["sobolev"] = nullptr;
  }
  json warnings = json::array();
  for (const auto& w : X.warnings) warnings.push_back(w);
  if (cmp.worst_distance_margin < -1e-12) warnings.push_back("d exceeds d_l on some pair");
  if (cmp.worst_volume_margin < -1e-12) warnings.push_back("metric-graph ball exceeds graph ball");
  if (ids.max() > 1e-10) warnings.push_back("identity residual above 1e-10");
  if (!sob) warnings.push_back("edges longer than c0: vertex-trace bound skipped");
  if (sob && (sob->trace_violations + sob->global_violations) > 0) warnings.push_back("Sobolev bound violated");
  r["warnings"] = warnings;

  if (!a.dump_metric_graph.empty()) {
    std::ostringstream s;
    write_metric_graph(s, X);
    emit(a.dump_metric_graph, s.str());
  }
  if (!a.dump_extension.empty()) {
    std::ostringstream s;
    write_piecewise(s, v);
    emit(a.dump_extension, s.str());
  }
  emit_report(c, r, t0);
  return warnings.empty() ? kExitOk : kExitWarning;
}

struct VolumeArgs {
  double r_max = 16.0;
  std::size_t steps = 64;
  double r_min = 1.0;
  std::string csv;
  std::size_t ball_cap = kDefaultBallCap;
};

int cmd_volume(const InputOptions& o, const Common& c, const VolumeArgs& a,
               std::chrono::steady_clock::time_point t0) {
  if (!(a.r_max > 0.0) || a.steps == 0) throw UsageError("--r-max and --steps must be positive");
  const auto in = load_input(o);
  const auto metric = choose_metric(in, o, "graph");
  auto prof = volume_profile(in.g(), metric.lengths, o.center, a.r_max, a.steps, a.ball_cap);
  prof.metric = metric.name;
  const auto gi = grigoryan_integral(prof, a.r_min);
  const auto fit = growth_fit(prof);

  json r = report_head("volume", &in);
  r["params"] = {{"metric", metric.name}, {"center", o.center}, {"r_max", a.r_max},
                 {"steps", a.steps}, {"r_min", a.r_min}, {"ball_cap", a.ball_cap}};
  r["profile"] = {{"radii", numbers(prof.radii)},
                  {"volumes", numbers(prof.volumes)},
                  {"truncated", prof.truncated}};
  r["grigoryan"] = {{"value", number(gi.value)},
                    {"diagnostic", to_string(gi.diagnostic)},
                    {"tail_slope", number(gi.tail_slope)},
                    {"heuristic", true}};
  r["growth_fit"] = {{"ok", fit.ok},
                     {"a", number(fit.a)},
                     {"b", number(fit.b)},
                     {"quadratic_regime", fit.quadratic_regime},
                     {"polynomial_trend", fit.polynomial_trend},
                     {"points", fit.points}};
  json warnings = json::array();
  if (prof.truncated) warnings.push_back("ball search hit its vertex cap; profile truncated");
  r["warnings"] = warnings;
  if (!a.csv.empty()) {
    std::ostringstream s;
    write_profile_csv(s, prof);
    emit(a.csv, s.str());
  }
  emit_report(c, r, t0);
  return warnings.empty() ? kExitOk : kExitWarning;
}

int cmd_family_gen(const std::string& kind, const std::vector<std::string>& raw_params,
                   std::optional<double> alpha, VertexId center, double radius,
                   const std::string& out, const std::string& metric_out) {
  auto params = parse_params(raw_params);
  if (alpha) params[kind == "anti_tree" ? "a" : "alpha"] = *alpha;
  const auto g = make_family(kind, params);
  std::vector<VertexId> vs;
  if (g.is_finite()) {
    vs = g.vertices();
  } else {
    vs = ball_window(g, unit_lengths(), center, radius).vertices;
    std::sort(vs.begin(), vs.end());
  }
  std::ostringstream s;
  s << "# family " << kind;
  s.precision(17);
  for (const auto& [k, v] : params) s << ' ' << k << '=' << v;
  if (!g.is_finite()) s << " (ball of radius " << radius << " around " << center << ")";
  s << '\n';
  write_graph(s, g, vs);
  emit(out, s.str());
  if (!metric_out.empty()) {
    // degree metric of the emitted (finite) graph
    std::istringstream back(s.str());
    const auto finite = read_graph(back);
    std::ostringstream m;
    write_metric(m, finite, vs, degree_metric(finite, 1.0));
    emit(metric_out, m.str());
  }
  return kExitOk;
}

int cmd_verify_all(const Common& c, std::chrono::steady_clock::time_point t0) {
  const auto suites = verify_all(c.seed);
  json r = report_head("verify-all", nullptr);
  r["input"] = {{"fingerprint", "fnv1a64:" + hex64(fnv1a("corpus:" + std::to_string(c.seed)))},
                {"source", {{"corpus_seed", c.seed}}}};
  json list = json::array();
  std::size_t failed = 0;
  for (const auto& s : suites) {
    if (!s.passed()) ++failed;
    list.push_back({{"name", s.name},
                    {"module", s.module},
                    {"cases", s.cases},
                    {"failures", s.failures},
                    {"measure", s.measure},
                    {"worst", number(s.worst)},
                    {"tolerance", s.tolerance},
                    {"passed", s.passed()},
                    {"note", s.note}});
  }
  r["suites"] = list;
  r["summary"] = {{"suites", suites.size()}, {"failed", failed}};
  emit_report(c, r, t0);
  return failed == 0 ? kExitOk : kExitWarning;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic completeness lab: adapted metrics, resolvent exhaustion, metric graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SCLAB_VERSION);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Write the report here instead of stdout");
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_flag("--timings", common.timings, "Include wall-clock timings (breaks byte-identity)");
  };

  InputOptions in;

  auto* check = app.add_subcommand("check-adapted", "Judge a metric: adapted, weakly adapted or neither");
  add_input_options(check, in, true);
  add_common(check);

  double lambda = 1.0;
  std::vector<double> radii;
  std::size_t ball_cap = kDefaultBallCap;
  auto* resolvent = app.add_subcommand("resolvent", "Exhaustion resolvent deficiency and verdict");
  add_input_options(resolvent, in, false);
  add_common(resolvent);
  resolvent->add_option("--lambda", lambda, "Resolvent parameter lambda > 0");
  resolvent->add_option("--radii", radii, "Increasing ball radii, comma separated")->delimiter(',');
  resolvent->add_option("--ball-cap", ball_cap, "Vertex cap per ball");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble of the minimal chain");
  add_input_options(simulate, in, false);
  add_common(simulate);
  simulate->add_option("--trajectories", sim.trajectories, "Number of trajectories");
  simulate->add_option("--horizon", sim.horizon, "Time horizon");
  simulate->add_option("--jump-cap", sim.jump_cap, "Jump cap per trajectory");
  simulate->add_option("--radius-cap", sim.radius_cap, "Stop when leaving this ball");
  simulate->add_flag("--per-trajectory", sim.per_trajectory, "List final times and jump counts");

  MetricVerifyArgs mv;
  auto* mverify = app.add_subcommand("metric-verify", "Metric graph construction and identity checks");
  add_input_options(mverify, in, true);
  add_common(mverify);
  mverify->add_option("--steps", mv.steps, "Number of comparison radii");
  mverify->add_option("--dump-metric-graph", mv.dump_metric_graph, "Write medge records here");
  mverify->add_option("--dump-extension", mv.dump_extension, "Write the extension's poly records here");

  VolumeArgs vol;
  auto* volume = app.add_subcommand("volume", "Volume profile and growth diagnostics");
  add_input_options(volume, in, false);
  add_common(volume);
  volume->add_option("--r-max", vol.r_max, "Largest radius");
  volume->add_option("--steps", vol.steps, "Number of radii");
  volume->add_option("--r-min", vol.r_min, "Lower limit of the growth integral");
  volume->add_option("--csv", vol.csv, "Write r,volume rows here");
  volume->add_option("--ball-cap", vol.ball_cap, "Vertex cap for the ball search");

  auto* family = app.add_subcommand("family", "Graph families");
  family->require_subcommand(1);
  std::string kind, family_out, metric_out;
  std::vector<std::string> fparams;
  std::optional<double> falpha;
  VertexId fcenter = 0;
  double fradius = 10.0;
  auto* gen = family->add_subcommand("gen", "Emit a family member in the text graph format");
  gen->add_option("--kind", kind, "birth_death, anti_tree, lattice2d, random_graph, random_tree")->required();
  gen->add_option("--param", fparams, "key=value (repeatable)");
  gen->add_option("--alpha", falpha, "Family exponent");
  gen->add_option("--center", fcenter, "Ball center for infinite families");
  gen->add_option("--radius", fradius, "Ball radius for infinite families");
  gen->add_option("--out", family_out, "Output file (default stdout)");
  gen->add_option("--metric-out", metric_out, "Also write the degree metric of the output");

  auto* verify = app.add_subcommand("verify-all", "Run every property suite on the bundled corpus");
  verify->add_option("--out", common.out, "Write the report here instead of stdout");
  std::uint64_t corpus_seed = kCorpusSeed;
  verify->add_option("--seed", corpus_seed, "Corpus seed");
  verify->add_flag("--timings", common.timings, "Include wall-clock timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (check->parsed()) return cmd_check_adapted(in, common, t0);
    if (resolvent->parsed()) return cmd_resolvent(in, common, lambda, radii, ball_cap, t0);
    if (simulate->parsed()) return cmd_simulate(in, common, sim, t0);
    if (mverify->parsed()) return cmd_metric_verify(in, common, mv, t0);
    if (volume->parsed()) return cmd_volume(in, common, vol, t0);
    if (gen->parsed()) return cmd_family_gen(kind, fparams, falpha, fcenter, fradius, family_out, metric_out);
    if (verify->parsed()) {
      common.seed = corpus_seed;
      return cmd_verify_all(common, t0);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
