#pragma once

#include <cstdint>
#include <vector>

#include "sgq/graph.hpp"
#include "sgq/query.hpp"

namespace sgq {

struct RandomGraphParams {
  size_t vertices = 100;
  size_t edges = 300;
  size_t vertex_labels = 1;
  size_t edge_labels = 1;
  uint64_t seed = 0;
};

// Uniform random endpoints and labels; self-loops skipped, duplicates allowed
// (the store dedupes). Label names: vertex L0..., edge T0...
Graph random_graph(const RandomGraphParams& p);

// n disjoint triads (u, r, t) with edges u->t, u->r, r->t, all one label.
// 3n vertices, exactly 3n edges, vertex label P, edge label E.
Graph triad_graph(size_t n);

// Skewed degrees: source drawn from a Zipf-like distribution with exponent
// `alpha` over the vertex ids, destination uniform. Single label pair.
Graph skewed_graph(size_t vertices, size_t edges, double alpha, uint64_t seed);

// `triangles` planted vertex-disjoint directed triangles plus `noise_edges`
// uniform random edges over the same vertex set; produces the clustering the
// intersection cache thrives on. Single label pair.
Graph planted_triangle_graph(size_t triangles, size_t noise_edges, uint64_t seed);

// Query workload: random walks over g collecting up to max_vertices distinct
// vertices, closed under all induced data edges. Queries are connected,
// labeled like the walked vertices/edges, and self-loop free.
std::vector<QueryGraph> random_walk_queries(const Graph& g, size_t count, size_t max_vertices,
                                            uint64_t seed);

}  // namespace sgq
