#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace sclab {

using VertexId = std::uint64_t;

/// Distance between two vertices; +inf marks "unreachable".
using DistanceFn = std::function<double(VertexId, VertexId)>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a ball search visits more vertices than its cap allows.
class BallCapExceeded : public GraphError {
 public:
  using GraphError::GraphError;
};

struct Neighbor {
  VertexId id;
  double weight;
};

/**
 * A locally finite weighted graph (V, omega, mu), possibly infinite.
 *
 * The graph is given by a deterministic neighbor enumerator and a vertex
 * measure. Everything downstream works on finite windows extracted from it.
 * Finite graphs additionally carry their vertex list.
 */
class WeightedGraph {
 public:
  using NeighborFn = std::function<std::vector<Neighbor>(VertexId)>;
  using MeasureFn = std::function<double(VertexId)>;

  WeightedGraph(NeighborFn neighbors, MeasureFn measure,
                std::optional<std::vector<VertexId>> vertices = std::nullopt);

  /// Neighbor list sorted by vertex id.
  std::vector<Neighbor> neighbors(VertexId x) const;
  double measure(VertexId x) const { return measure_(x); }

  /// omega(x, y) as enumerated from x; 0 when y is not a neighbor of x.
  double weight(VertexId x, VertexId y) const;

  /// Weighted degree Deg(x) = (1/mu(x)) sum_y omega(x, y).
  double degree(VertexId x) const;

  bool is_finite() const { return vertices_.has_value(); }
  /// Vertex list of a finite graph; throws for lazily generated graphs.
  const std::vector<VertexId>& vertices() const;

  /// Same edges, different vertex measure.
  WeightedGraph with_measure(MeasureFn measure) const;

 private:
  NeighborFn neighbors_;
  MeasureFn measure_;
  std::optional<std::vector<VertexId>> vertices_;
};

/// Builds finite graphs edge by edge; each undirected edge is stored on both sides.
class GraphBuilder {
 public:
  void add_vertex(VertexId id, double mu);
  /// Adds omega to the undirected edge {a, b} (both directions).
  void add_edge(VertexId a, VertexId b, double omega);
  /// Adds a single directed entry; used to construct deliberately broken inputs.
  void add_half_edge(VertexId from, VertexId to, double omega);

  bool has_vertex(VertexId id) const { return mu_.count(id) != 0; }
  std::size_t num_vertices() const { return mu_.size(); }

  WeightedGraph build() const;

 private:
  std::map<VertexId, double> mu_;
  std::map<VertexId, std::map<VertexId, double>> adj_;
};

/**
 * Real-valued function on vertices, implicitly 0 where no value is stored.
 */
class VertexFunction {
 public:
  VertexFunction() = default;
  VertexFunction(std::initializer_list<std::pair<const VertexId, double>> init)
      : values_(init) {}

  void set(VertexId x, double value) { values_[x] = value; }
  bool contains(VertexId x) const { return values_.count(x) != 0; }
  /// Stored value or 0.
  double operator()(VertexId x) const;
  /// Stored value; throws naming the vertex when absent.
  double at(VertexId x) const;

  const std::map<VertexId, double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// Vertices with a nonzero stored value.
  std::vector<VertexId> support() const;

 private:
  std::map<VertexId, double> values_;
};

/**
 * Finite induced piece of a weighted graph.
 *
 * `interior[i]` is true when every neighbor of `vertices[i]` lies in the
 * window. Edges are stored once with local indices a < b. The weight going
 * to vertices outside the window is kept per vertex so that Dirichlet
 * problems can be posed without re-querying the source.
 */
struct GraphWindow {
  struct Edge {
    std::size_t a;
    std::size_t b;
    double weight;
  };

  std::vector<VertexId> vertices;
  std::vector<double> mu;
  std::vector<bool> interior;
  std::vector<Edge> edges;
  std::vector<double> exterior_weight;
  std::unordered_map<VertexId, std::size_t> index;

  std::size_t size() const { return vertices.size(); }
  bool contains(VertexId x) const { return index.count(x) != 0; }
  std::size_t local(VertexId x) const;
  std::vector<VertexId> interior_vertices() const;
  std::vector<VertexId> boundary_vertices() const;

  /// Local adjacency: for each vertex, (neighbor local index, weight).
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency() const;
};

/// Window on an explicit vertex list, in the given order.
GraphWindow make_window(const WeightedGraph& g, const std::vector<VertexId>& vertices);

/// The whole of a finite graph as a window.
GraphWindow whole_graph_window(const WeightedGraph& g);

struct Violation {
  std::string kind;
  VertexId x;
  std::optional<VertexId> y;
  std::string message;
};

/// Checks symmetry, positivity, absence of loops and local finiteness on the window.
std::vector<Violation> validate(const WeightedGraph& g, const GraphWindow& window);

/// (1/mu(x)) sum_y omega(x,y) (u(x) - u(y)); u must be defined at x and its neighbors.
double formal_laplacian(const WeightedGraph& g, const VertexFunction& u, VertexId x);

/// 1/2 sum_x sum_y omega(x,y) (u(x)-u(y)) (v(x)-v(y)) for finitely supported u, v.
double energy(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v);

/// Keeps only edges with d(x, y) <= c0.
WeightedGraph truncate_by_jump_size(const WeightedGraph& g, DistanceFn d, double c0);

}  // namespace sclab
