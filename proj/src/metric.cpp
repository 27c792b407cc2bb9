#include "sclab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace sclab {

namespace {

constexpr double kAdaptedTolerance = 1e-12;

struct HeapEntry {
  double dist;
  VertexId id;
  // min-heap on (dist, id)
  bool operator>(const HeapEntry& o) const {
    return dist > o.dist || (dist == o.dist && id > o.id);
  }
};

using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

}  // namespace

EdgeLengths unit_lengths(double c0) {
  return {[](VertexId, VertexId) { return 1.0; }, c0};
}

EdgeLengths degree_metric(const WeightedGraph& g, double c0) {
  if (!(c0 > 0.0)) throw std::invalid_argument("degree_metric: c0 must be positive");
  struct DegreeCache {
    explicit DegreeCache(WeightedGraph g) : graph(std::move(g)) {}
    WeightedGraph graph;
    std::mutex mutex;
    std::unordered_map<VertexId, double> deg;

    double operator()(VertexId x) {
      {
        std::lock_guard lock(mutex);
        if (auto it = deg.find(x); it != deg.end()) return it->second;
      }
      const double value = graph.degree(x);
      std::lock_guard lock(mutex);
      deg.emplace(x, value);
      return value;
    }
  };
  auto cache = std::make_shared<DegreeCache>(g);
  auto sigma = [cache, c0](VertexId x, VertexId y) {
    const double dx = (*cache)(x);
    const double dy = (*cache)(y);
    return std::min({c0, 1.0 / std::sqrt(dx), 1.0 / std::sqrt(dy)});
  };
  return {std::move(sigma), c0};
}

EdgeLengths table_lengths(std::map<std::pair<VertexId, VertexId>, double> table, double c0) {
  auto shared = std::make_shared<const std::map<std::pair<VertexId, VertexId>, double>>(
      std::move(table));
  auto sigma = [shared](VertexId x, VertexId y) {
    auto it = shared->find({std::min(x, y), std::max(x, y)});
    if (it == shared->end()) {
      throw GraphError("no length given for edge (" + std::to_string(x) + "," +
                       std::to_string(y) + ")");
    }
    return it->second;
  };
  return {std::move(sigma), c0};
}

ShortestPaths dijkstra(const WeightedGraph& g, const EdgeLengths& lengths, VertexId root,
                       double radius, std::size_t cap) {
  auto out = dijkstra_bounded(g, lengths, root, radius, cap);
  if (out.capped) {
    throw BallCapExceeded("ball not finite up to cap (" + std::to_string(cap) +
                          " vertices) around vertex " + std::to_string(root));
  }
  return out;
}

ShortestPaths dijkstra_bounded(const WeightedGraph& g, const EdgeLengths& lengths, VertexId root,
                               double radius, std::size_t cap) {
  ShortestPaths out;
  std::unordered_map<VertexId, double> best;
  MinHeap heap;
  heap.push({0.0, root});
  best[root] = 0.0;
  while (!heap.empty()) {
    const auto [dist, x] = heap.top();
    heap.pop();
    if (out.dist.count(x) != 0 || dist > best[x]) continue;
    if (dist > radius) break;
    if (out.order.size() >= cap) {
      out.capped = true;
      break;
    }
    out.dist[x] = dist;
    out.order.push_back(x);
    for (const auto& n : g.neighbors(x)) {
      if (out.dist.count(n.id) != 0) continue;
      const double cand = dist + lengths.sigma(x, n.id);
      auto it = best.find(n.id);
      if (it == best.end() || cand < it->second) {
        best[n.id] = cand;
        heap.push({cand, n.id});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct PathMetric::Cache {
  std::unordered_map<VertexId, double> settled;
  std::unordered_map<VertexId, double> best;
  MinHeap heap;
};

PathMetric::PathMetric(WeightedGraph g, EdgeLengths lengths, std::size_t cap)
    : graph_(std::move(g)), lengths_(std::move(lengths)), cap_(cap) {}

PathMetric::~PathMetric() = default;

PathMetric::PathMetric(PathMetric&& o) noexcept
    : graph_(std::move(o.graph_)),
      lengths_(std::move(o.lengths_)),
      cap_(o.cap_),
      caches_(std::move(o.caches_)) {}

PathMetric& PathMetric::operator=(PathMetric&& o) noexcept {
  if (this != &o) {
    graph_ = std::move(o.graph_);
    lengths_ = std::move(o.lengths_);
    cap_ = o.cap_;
    caches_ = std::move(o.caches_);
  }
  return *this;
}

PathMetric::Cache& PathMetric::cache_for(VertexId root) const {
  auto& slot = caches_[root];
  if (!slot) {
    slot = std::make_unique<Cache>();
    slot->best[root] = 0.0;
    slot->heap.push({0.0, root});
  }
  return *slot;
}

double PathMetric::distance(VertexId x, VertexId y) const {
  if (x == y) return 0.0;
  std::lock_guard lock(mutex_);
  // both orientations share one cache so that d(x,y) == d(y,x) bitwise
  const VertexId root = std::min(x, y);
  const VertexId target = std::max(x, y);
  Cache& c = cache_for(root);
  if (auto it = c.settled.find(target); it != c.settled.end()) return it->second;
  while (!c.heap.empty()) {
    const auto [dist, v] = c.heap.top();
    if (c.settled.count(v) != 0 || dist > c.best[v]) {
      c.heap.pop();
      continue;
    }
    if (c.settled.size() >= cap_) return kUnreachable;
    c.heap.pop();
    c.settled[v] = dist;
    for (const auto& n : graph_.neighbors(v)) {
      if (c.settled.count(n.id) != 0) continue;
      const double cand = dist + lengths_.sigma(v, n.id);
      auto it = c.best.find(n.id);
      if (it == c.best.end() || cand < it->second) {
        c.best[n.id] = cand;
        c.heap.push({cand, n.id});
      }
    }
    if (v == target) return dist;
  }
  return kUnreachable;
}

DistanceFn PathMetric::as_function() const {
  return [this](VertexId x, VertexId y) { return distance(x, y); };
}

// ---------------------------------------------------------------------------

GraphWindow ball_window(const WeightedGraph& g, const EdgeLengths& lengths, VertexId x0,
                        double r, std::size_t cap) {
  if (r < 0.0) throw std::invalid_argument("ball_window: negative radius");
  const auto sp = dijkstra(g, lengths, x0, r, cap);
  return make_window(g, sp.order);
}

std::string to_string(Adaptedness a) {
  switch (a) {
    case Adaptedness::adapted:
      return "adapted";
    case Adaptedness::weakly_adapted:
      return "weakly_adapted";
    case Adaptedness::neither:
      return "neither";
  }
  return "neither";
}

AdaptednessReport check_adapted(const WeightedGraph& g, const DistanceFn& d, double c0,
                                const GraphWindow& window) {
  if (!(c0 > 0.0)) throw std::invalid_argument("check_adapted: c0 must be positive");
  AdaptednessReport rep;
  bool weak = true;
  bool jumps_ok = true;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (!window.interior[i]) continue;
    const VertexId x = window.vertices[i];
    double sum = 0.0;
    for (const auto& n : g.neighbors(x)) {
      const double dxy = d(x, n.id);
      const double t = std::min(dxy, c0);
      sum += n.weight * t * t;
      if (dxy > rep.max_edge_distance || !rep.longest_edge) {
        rep.max_edge_distance = std::max(rep.max_edge_distance, dxy);
        rep.longest_edge = std::pair{x, n.id};
      }
      if (dxy > c0) jumps_ok = false;
    }
    sum /= g.measure(x);
    if (!rep.argmax || sum > rep.max_sum) {
      rep.max_sum = sum;
      rep.argmax = x;
    }
    if (sum > 1.0 + kAdaptedTolerance) weak = false;
    ++rep.vertices_checked;
  }
  if (!weak) {
    rep.verdict = Adaptedness::neither;
  } else if (!jumps_ok) {
    rep.verdict = Adaptedness::weakly_adapted;
  } else {
    rep.verdict = Adaptedness::adapted;
  }
  return rep;
}

}  // namespace sclab
