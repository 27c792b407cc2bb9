#include "sclab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace sclab {

WeightedGraph::WeightedGraph(NeighborFn neighbors, MeasureFn measure,
                             std::optional<std::vector<VertexId>> vertices)
    : neighbors_(std::move(neighbors)),
      measure_(std::move(measure)),
      vertices_(std::move(vertices)) {
  if (!neighbors_ || !measure_) {
    throw std::invalid_argument("WeightedGraph: empty neighbor or measure function");
  }
}

std::vector<Neighbor> WeightedGraph::neighbors(VertexId x) const {
  auto list = neighbors_(x);
  auto by_id = [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; };
  if (!std::is_sorted(list.begin(), list.end(), by_id)) {
    std::stable_sort(list.begin(), list.end(), by_id);
  }
  return list;
}

double WeightedGraph::weight(VertexId x, VertexId y) const {
  const auto list = neighbors(x);
  auto it = std::lower_bound(list.begin(), list.end(), y,
                             [](const Neighbor& n, VertexId id) { return n.id < id; });
  return (it != list.end() && it->id == y) ? it->weight : 0.0;
}

double WeightedGraph::degree(VertexId x) const {
  double sum = 0.0;
  for (const auto& n : neighbors(x)) sum += n.weight;
  return sum / measure(x);
}

const std::vector<VertexId>& WeightedGraph::vertices() const {
  if (!vertices_) {
    throw GraphError("vertex list requested for a lazily generated (infinite) graph");
  }
  return *vertices_;
}

WeightedGraph WeightedGraph::with_measure(MeasureFn measure) const {
  return WeightedGraph(neighbors_, std::move(measure), vertices_);
}

// ---------------------------------------------------------------------------

void GraphBuilder::add_vertex(VertexId id, double mu) {
  mu_[id] = mu;
  adj_[id];
}

void GraphBuilder::add_edge(VertexId a, VertexId b, double omega) {
  add_half_edge(a, b, omega);
  add_half_edge(b, a, omega);
}

void GraphBuilder::add_half_edge(VertexId from, VertexId to, double omega) {
  if (!has_vertex(from)) add_vertex(from, 1.0);
  if (!has_vertex(to)) add_vertex(to, 1.0);
  adj_[from][to] += omega;
}

WeightedGraph GraphBuilder::build() const {
  auto adj = std::make_shared<std::unordered_map<VertexId, std::vector<Neighbor>>>();
  auto mu = std::make_shared<std::unordered_map<VertexId, double>>();
  std::vector<VertexId> ids;
  ids.reserve(mu_.size());
  for (const auto& [id, m] : mu_) {
    ids.push_back(id);
    (*mu)[id] = m;
    auto& list = (*adj)[id];
    for (const auto& [to, w] : adj_.at(id)) list.push_back({to, w});
  }
  auto neighbors = [adj](VertexId x) -> std::vector<Neighbor> {
    auto it = adj->find(x);
    if (it == adj->end()) throw GraphError("unknown vertex " + std::to_string(x));
    return it->second;
  };
  auto measure = [mu](VertexId x) -> double {
    auto it = mu->find(x);
    if (it == mu->end()) throw GraphError("unknown vertex " + std::to_string(x));
    return it->second;
  };
  return WeightedGraph(std::move(neighbors), std::move(measure), std::move(ids));
}

// ---------------------------------------------------------------------------

double VertexFunction::operator()(VertexId x) const {
  auto it = values_.find(x);
  return it == values_.end() ? 0.0 : it->second;
}

double VertexFunction::at(VertexId x) const {
  auto it = values_.find(x);
  if (it == values_.end()) {
    throw std::out_of_range("vertex function undefined at vertex " + std::to_string(x));
  }
  return it->second;
}

std::vector<VertexId> VertexFunction::support() const {
  std::vector<VertexId> out;
  for (const auto& [x, v] : values_) {
    if (v != 0.0) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t GraphWindow::local(VertexId x) const {
  auto it = index.find(x);
  if (it == index.end()) {
    throw std::out_of_range("vertex " + std::to_string(x) + " is not in the window");
  }
  return it->second;
}

std::vector<VertexId> GraphWindow::interior_vertices() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (interior[i]) out.push_back(vertices[i]);
  }
  return out;
}

std::vector<VertexId> GraphWindow::boundary_vertices() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!interior[i]) out.push_back(vertices[i]);
  }
  return out;
}

std::vector<std::vector<std::pair<std::size_t, double>>> GraphWindow::adjacency() const {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(size());
  for (const auto& e : edges) {
    adj[e.a].emplace_back(e.b, e.weight);
    adj[e.b].emplace_back(e.a, e.weight);
  }
  return adj;
}

GraphWindow make_window(const WeightedGraph& g, const std::vector<VertexId>& vertices) {
  GraphWindow w;
  w.vertices = vertices;
  w.index.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!w.index.emplace(vertices[i], i).second) {
      throw std::invalid_argument("duplicate vertex " + std::to_string(vertices[i]) +
                                  " in window");
    }
  }
  w.mu.resize(vertices.size());
  w.interior.assign(vertices.size(), true);
  w.exterior_weight.assign(vertices.size(), 0.0);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const VertexId x = vertices[i];
    w.mu[i] = g.measure(x);
    for (const auto& n : g.neighbors(x)) {
      if (n.id == x) continue;
      auto it = w.index.find(n.id);
      if (it == w.index.end()) {
        w.interior[i] = false;
        w.exterior_weight[i] += n.weight;
      } else if (i < it->second) {
        w.edges.push_back({i, it->second, n.weight});
      }
    }
  }
  return w;
}

GraphWindow whole_graph_window(const WeightedGraph& g) {
  return make_window(g, g.vertices());
}

std::vector<Violation> validate(const WeightedGraph& g, const GraphWindow& window) {
  std::vector<Violation> out;
  auto describe = [](VertexId x, VertexId y) {
    std::ostringstream s;
    s << "(" << x << "," << y << ")";
    return s.str();
  };
  for (const VertexId x : window.vertices) {
    const double m = g.measure(x);
    if (!(m > 0.0) || !std::isfinite(m)) {
      out.push_back({"measure_positivity", x, std::nullopt,
                     "mu(" + std::to_string(x) + ") must be positive and finite"});
    }
    const auto list = g.neighbors(x);
    std::set<VertexId> seen;
    for (const auto& n : list) {
      if (!seen.insert(n.id).second) {
        out.push_back({"duplicate_neighbor", x, n.id,
                       "neighbor listed twice at " + describe(x, n.id)});
      }
      if (n.id == x) {
        out.push_back({"loop", x, x, "loop at " + std::to_string(x)});
        continue;
      }
      if (!(n.weight > 0.0) || !std::isfinite(n.weight)) {
        out.push_back({"weight_positivity", x, n.id,
                       "non-positive weight at " + describe(x, n.id)});
      }
      const double back = g.weight(n.id, x);
      if (back != n.weight && (x < n.id || !window.contains(n.id))) {
        out.push_back({"symmetry", x, n.id,
                       "omega" + describe(x, n.id) + "=" + std::to_string(n.weight) +
                           " but omega" + describe(n.id, x) + "=" + std::to_string(back)});
      }
    }
  }
  return out;
}

double formal_laplacian(const WeightedGraph& g, const VertexFunction& u, VertexId x) {
  const double ux = u.at(x);
  double sum = 0.0;
  for (const auto& n : g.neighbors(x)) {
    if (!u.contains(n.id)) {
      throw std::out_of_range("formal_laplacian at " + std::to_string(x) +
                              ": value missing at neighbor " + std::to_string(n.id));
    }
    sum += n.weight * (ux - u.at(n.id));
  }
  return sum / g.measure(x);
}

double energy(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v) {
  std::set<VertexId> support;
  for (auto x : u.support()) support.insert(x);
  for (auto x : v.support()) support.insert(x);
  double sum = 0.0;
  for (const VertexId x : support) {
    for (const auto& n : g.neighbors(x)) {
      // each edge once: from its smaller endpoint when both lie in the support
      if (support.count(n.id) != 0 && n.id < x) continue;
      sum += n.weight * (u(x) - u(n.id)) * (v(x) - v(n.id));
    }
  }
  return sum;
}

WeightedGraph truncate_by_jump_size(const WeightedGraph& g, DistanceFn d, double c0) {
  if (!(c0 > 0.0)) throw std::invalid_argument("truncate_by_jump_size: c0 must be positive");
  auto base = std::make_shared<WeightedGraph>(g);
  auto neighbors = [base, d = std::move(d), c0](VertexId x) {
    std::vector<Neighbor> kept;
    for (const auto& n : base->neighbors(x)) {
      if (d(x, n.id) <= c0) kept.push_back(n);
    }
    return kept;
  };
  auto measure = [base](VertexId x) { return base->measure(x); };
  std::optional<std::vector<VertexId>> verts;
  if (g.is_finite()) verts = g.vertices();
  return WeightedGraph(std::move(neighbors), std::move(measure), std::move(verts));
}

}  // namespace sclab
