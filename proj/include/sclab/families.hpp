#pragma once

#include <cstdint>
#include <string>

#include "sclab/graph.hpp"

namespace sclab {

/// Chain on N with omega(n, n+1) = (n+1)^alpha and mu == 1.
WeightedGraph birth_death(double alpha);

/**
 * Anti-tree: spheres S_0 = {0} and |S_k| = ceil(k^a) for k >= 1, with every
 * vertex of S_k joined to every vertex of S_{k+1}; omega == mu == 1.
 * Vertex ids run through the spheres in order. Neighbor queries on spheres
 * deeper than `depth_cap`, or yielding more than `neighbor_cap` neighbors,
 * throw GraphError.
 */
WeightedGraph anti_tree(double a, std::size_t depth_cap = 64,
                        std::size_t neighbor_cap = 10'000'000);

/// |S_k| for the anti-tree with exponent a.
std::uint64_t anti_tree_sphere_size(double a, std::uint64_t k);

/// Sphere index of an anti-tree vertex.
std::uint64_t anti_tree_depth(double a, VertexId id, std::size_t depth_cap = 64);

/// Z^2 with nearest-neighbor unit weights and mu == 1.
WeightedGraph lattice2d();
VertexId lattice_id(std::int32_t x, std::int32_t y);

struct RandomGraphSpec {
  std::size_t n = 50;
  double edge_prob = 0.1;
  double weight_lo = 0.5;
  double weight_hi = 2.0;
  double mu_lo = 0.5;
  double mu_hi = 2.0;
  std::uint64_t seed = 0;
};

/// Erdos-Renyi graph, largest component kept and relabeled 0..m-1.
WeightedGraph random_graph(const RandomGraphSpec& spec);

/// Uniform random recursive tree on n vertices, weights and masses drawn as for random_graph.
WeightedGraph random_tree(const RandomGraphSpec& spec);

}  // namespace sclab
