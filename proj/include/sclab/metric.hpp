#pragma once

#include <limits>
#include <memory>
#include <mutex>
#include <string>

#include "sclab/graph.hpp"

namespace sclab {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Default vertex cap for ball searches on lazily generated graphs.
inline constexpr std::size_t kDefaultBallCap = 2'000'000;

/**
 * Edge length assignment sigma together with the jump size c0.
 *
 * sigma is only ever queried on enumerated edges.
 */
struct EdgeLengths {
  std::function<double(VertexId, VertexId)> sigma;
  double c0 = 1.0;
};

/// sigma == 1 on every edge (the combinatorial graph metric d_0).
EdgeLengths unit_lengths(double c0 = 1.0);

/// sigma(x,y) = min(c0, Deg(x)^{-1/2}, Deg(y)^{-1/2}).
EdgeLengths degree_metric(const WeightedGraph& g, double c0 = 1.0);

/// Lengths looked up in a table keyed by the unordered edge; missing edges throw.
EdgeLengths table_lengths(std::map<std::pair<VertexId, VertexId>, double> table, double c0);

/// Settled vertices of a Dijkstra search, in settle order.
struct ShortestPaths {
  std::vector<VertexId> order;
  /// true when the search stopped at its vertex cap before exhausting the radius
  bool capped = false;
  std::unordered_map<VertexId, double> dist;

  double distance(VertexId y) const {
    auto it = dist.find(y);
    return it == dist.end() ? kUnreachable : it->second;
  }
};

/**
 * Dijkstra from `root` over sigma, settling every vertex with distance <= radius.
 * Ties are broken by vertex id. Throws BallCapExceeded when more than `cap`
 * vertices would be settled.
 */
ShortestPaths dijkstra(const WeightedGraph& g, const EdgeLengths& lengths, VertexId root,
                       double radius, std::size_t cap = kDefaultBallCap);

/// As dijkstra(), but returns the vertices settled so far with `capped` set instead of throwing.
ShortestPaths dijkstra_bounded(const WeightedGraph& g, const EdgeLengths& lengths, VertexId root,
                               double radius, std::size_t cap);

/**
 * Shortest-path metric induced by edge lengths, with per-root caches.
 *
 * Each cache keeps the Dijkstra frontier so that later queries resume the
 * search instead of restarting it. Safe to query from several threads.
 */
class PathMetric {
 public:
  PathMetric(WeightedGraph g, EdgeLengths lengths, std::size_t cap = kDefaultBallCap);
  ~PathMetric();
  PathMetric(const PathMetric&) = delete;
  PathMetric& operator=(const PathMetric&) = delete;
  PathMetric(PathMetric&&) noexcept;
  PathMetric& operator=(PathMetric&&) noexcept;

  /// Length of a shortest path, or kUnreachable when the search exhausts the cap first.
  double distance(VertexId x, VertexId y) const;

  const EdgeLengths& lengths() const { return lengths_; }
  const WeightedGraph& graph() const { return graph_; }
  double c0() const { return lengths_.c0; }

  DistanceFn as_function() const;

 private:
  struct Cache;
  Cache& cache_for(VertexId root) const;

  WeightedGraph graph_;
  EdgeLengths lengths_;
  std::size_t cap_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<VertexId, std::unique_ptr<Cache>> caches_;
};

/// Closed ball {y : d(x0, y) <= r} of the path metric, as a window in settle order.
GraphWindow ball_window(const WeightedGraph& g, const EdgeLengths& lengths, VertexId x0,
                        double r, std::size_t cap = kDefaultBallCap);

enum class Adaptedness { adapted, weakly_adapted, neither };

std::string to_string(Adaptedness a);

struct AdaptednessReport {
  Adaptedness verdict = Adaptedness::adapted;
  /// max over interior x of (1/mu(x)) sum_y omega(x,y) (d(x,y) ^ c0)^2
  double max_sum = 0.0;
  std::optional<VertexId> argmax;
  /// longest edge distance seen and one edge realizing it
  double max_edge_distance = 0.0;
  std::optional<std::pair<VertexId, VertexId>> longest_edge;
  std::size_t vertices_checked = 0;
};

/**
 * Judges the metric on interior window vertices: weakly adapted when every
 * truncated sum is <= 1, adapted when in addition every edge has d <= c0.
 */
AdaptednessReport check_adapted(const WeightedGraph& g, const DistanceFn& d, double c0,
                                const GraphWindow& window);

}  // namespace sclab
