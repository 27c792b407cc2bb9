#include "sclab/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sclab/rng.hpp"

namespace sclab {

WeightedGraph birth_death(double alpha) {
  auto neighbors = [alpha](VertexId n) {
    std::vector<Neighbor> out;
    if (n > 0) out.push_back({n - 1, std::pow(double(n), alpha)});
    out.push_back({n + 1, std::pow(double(n + 1), alpha)});
    return out;
  };
  return WeightedGraph(neighbors, [](VertexId) { return 1.0; });
}

std::uint64_t anti_tree_sphere_size(double a, std::uint64_t k) {
  if (k == 0) return 1;
  const double r = std::pow(double(k), a);
  const double nearest = std::round(r);
  // integer powers are exact; keep them from rounding up
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, r)) return std::uint64_t(nearest);
  return std::uint64_t(std::ceil(r));
}

namespace {

struct AntiTreeLayout {
  double a;
  std::vector<std::uint64_t> offset;  // offset[k] = first id of S_k; one extra entry

  AntiTreeLayout(double a_, std::size_t depth_cap) : a(a_) {
    offset.resize(depth_cap + 3);
    offset[0] = 0;
    for (std::size_t k = 0; k + 1 < offset.size(); ++k) {
      offset[k + 1] = offset[k] + anti_tree_sphere_size(a, k);
    }
  }

  std::uint64_t depth(VertexId id) const {
    auto it = std::upper_bound(offset.begin(), offset.end(), id);
    if (it == offset.end()) throw GraphError("anti-tree vertex beyond depth cap");
    return std::uint64_t(it - offset.begin()) - 1;
  }
};

}  // namespace

std::uint64_t anti_tree_depth(double a, VertexId id, std::size_t depth_cap) {
  return AntiTreeLayout(a, depth_cap).depth(id);
}

WeightedGraph anti_tree(double a, std::size_t depth_cap, std::size_t neighbor_cap) {
  if (a < 0.0) throw std::invalid_argument("anti_tree: exponent must be non-negative");
  auto layout = std::make_shared<const AntiTreeLayout>(a, depth_cap);
  auto neighbors = [layout, depth_cap, neighbor_cap](VertexId id) {
    const std::uint64_t k = layout->depth(id);
    if (k >= depth_cap) {
      throw GraphError("anti-tree: vertex " + std::to_string(id) + " lies at depth " +
                       std::to_string(k) + ", beyond depth cap " + std::to_string(depth_cap));
    }
    const std::uint64_t lo = k == 0 ? layout->offset[0] : layout->offset[k - 1];
    const std::uint64_t hi = layout->offset[k + 2];
    const std::uint64_t count = (hi - lo) - (layout->offset[k + 1] - layout->offset[k]);
    if (count > neighbor_cap) {
      throw GraphError("anti-tree: vertex " + std::to_string(id) + " has " +
                       std::to_string(count) + " neighbors, above cap");
    }
    std::vector<Neighbor> out;
    out.reserve(count);
    if (k > 0) {
      for (std::uint64_t y = layout->offset[k - 1]; y < layout->offset[k]; ++y) out.push_back({y, 1.0});
    }
    for (std::uint64_t y = layout->offset[k + 1]; y < layout->offset[k + 2]; ++y) out.push_back({y, 1.0});
    return out;
  };
  return WeightedGraph(neighbors, [](VertexId) { return 1.0; });
}

// ---------------------------------------------------------------------------

namespace {

std::uint32_t zig(std::int32_t v) {
  return (static_cast<std::uint32_t>(v) << 1) ^ static_cast<std::uint32_t>(v >> 31);
}

std::int32_t unzig(std::uint32_t v) {
  return static_cast<std::int32_t>(v >> 1) ^ -static_cast<std::int32_t>(v & 1);
}

}  // namespace

VertexId lattice_id(std::int32_t x, std::int32_t y) {
  return (VertexId(zig(x)) << 32) | zig(y);
}

WeightedGraph lattice2d() {
  auto neighbors = [](VertexId id) {
    const std::int32_t x = unzig(std::uint32_t(id >> 32));
    const std::int32_t y = unzig(std::uint32_t(id & 0xFFFFFFFFu));
    return std::vector<Neighbor>{{lattice_id(x - 1, y), 1.0},
                                 {lattice_id(x + 1, y), 1.0},
                                 {lattice_id(x, y - 1), 1.0},
                                 {lattice_id(x, y + 1), 1.0}};
  };
  return WeightedGraph(neighbors, [](VertexId) { return 1.0; });
}

// ---------------------------------------------------------------------------

namespace {

double uniform(SplitMix64& rng, double lo, double hi) {
  return lo == hi ? lo : lo + (hi - lo) * rng.uniform_open();
}

struct EdgeRec {
  std::size_t a, b;
  double w;
};

WeightedGraph largest_component(std::size_t n, const std::vector<EdgeRec>& edges,
                                const std::vector<double>& mu) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e.a)] = find(e.b);
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++size[find(i)];
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // ties go to the component containing the smallest vertex
    if (size[find(i)] > size[find(best)]) best = i;
  }
  const std::size_t root = find(best);
  std::vector<std::int64_t> relabel(n, -1);
  GraphBuilder b;
  VertexId next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) == root) {
      relabel[i] = std::int64_t(next);
      b.add_vertex(next++, mu[i]);
    }
  }
  for (const auto& e : edges) {
    if (relabel[e.a] >= 0) b.add_edge(VertexId(relabel[e.a]), VertexId(relabel[e.b]), e.w);
  }
  return b.build();
}

}  // namespace

WeightedGraph random_graph(const RandomGraphSpec& spec) {
  if (spec.n == 0 || spec.n > 10'000) throw std::invalid_argument("random_graph: need 1 <= n <= 10^4");
  SplitMix64 rng(spec.seed, 1);
  std::vector<double> mu(spec.n);
  for (auto& m : mu) m = uniform(rng, spec.mu_lo, spec.mu_hi);
  std::vector<EdgeRec> edges;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      if (rng.uniform_open() < spec.edge_prob) {
        edges.push_back({i, j, uniform(rng, spec.weight_lo, spec.weight_hi)});
      }
    }
  }
  return largest_component(spec.n, edges, mu);
}

WeightedGraph random_tree(const RandomGraphSpec& spec) {
  if (spec.n == 0 || spec.n > 10'000) throw std::invalid_argument("random_tree: need 1 <= n <= 10^4");
  SplitMix64 rng(spec.seed, 2);
  std::vector<double> mu(spec.n);
  for (auto& m : mu) m = uniform(rng, spec.mu_lo, spec.mu_hi);
  std::vector<EdgeRec> edges;
  for (std::size_t i = 1; i < spec.n; ++i) {
    const std::size_t parent = rng() % i;
    edges.push_back({parent, i, uniform(rng, spec.weight_lo, spec.weight_hi)});
  }
  return largest_component(spec.n, edges, mu);
}

}  // namespace sclab
