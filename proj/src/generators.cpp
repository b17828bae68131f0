#include "sgq/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace sgq {

namespace {

std::vector<std::string> label_names(const char* prefix, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

Graph random_graph(const RandomGraphParams& p) {
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<VertexId> pick_v(0, static_cast<VertexId>(p.vertices - 1));
  std::uniform_int_distribution<LabelId> pick_vl(0, static_cast<LabelId>(p.vertex_labels - 1));
  std::uniform_int_distribution<LabelId> pick_el(0, static_cast<LabelId>(p.edge_labels - 1));
  std::vector<LabelId> vlabels(p.vertices);
  for (auto& l : vlabels) l = pick_vl(rng);
  std::vector<EdgeRecord> edges;
  edges.reserve(p.edges);
  for (size_t i = 0; i < p.edges; ++i) {
    VertexId a = pick_v(rng), b = pick_v(rng);
    if (a == b) continue;
    edges.push_back({a, b, pick_el(rng)});
  }
  return Graph(std::move(vlabels), std::move(edges), label_names("L", p.vertex_labels),
               label_names("T", p.edge_labels));
}

Graph triad_graph(size_t n) {
  std::vector<LabelId> vlabels(3 * n, 0);
  std::vector<EdgeRecord> edges;
  edges.reserve(3 * n);
  for (VertexId i = 0; i < n; ++i) {
    VertexId u = 3 * i, r = 3 * i + 1, t = 3 * i + 2;
    edges.push_back({u, t, 0});
    edges.push_back({u, r, 0});
    edges.push_back({r, t, 0});
  }
  return Graph(std::move(vlabels), std::move(edges), {"P"}, {"E"});
}

Graph skewed_graph(size_t vertices, size_t edges, double alpha, uint64_t seed) {
  std::mt19937_64 rng(seed);
  // inverse-CDF sampling from the Zipf weights 1/(i+1)^alpha
  std::vector<double> cdf(vertices);
  double acc = 0.0;
  for (size_t i = 0; i < vertices; ++i) {
    acc += 1.0 / std::pow(static_cast<double>(i + 1), alpha);
    cdf[i] = acc;
  }
  std::uniform_real_distribution<double> unit(0.0, acc);
  std::uniform_int_distribution<VertexId> pick_v(0, static_cast<VertexId>(vertices - 1));
  std::vector<EdgeRecord> out;
  out.reserve(edges);
  while (out.size() < edges) {
    auto it = std::lower_bound(cdf.begin(), cdf.end(), unit(rng));
    VertexId a = static_cast<VertexId>(it - cdf.begin());
    VertexId b = pick_v(rng);
    if (a == b) continue;
    out.push_back({a, b, 0});
  }
  return Graph(std::vector<LabelId>(vertices, 0), std::move(out), {"P"}, {"E"});
}

Graph planted_triangle_graph(size_t triangles, size_t noise_edges, uint64_t seed) {
  std::mt19937_64 rng(seed);
  size_t vertices = 3 * triangles;
  std::vector<EdgeRecord> edges;
  edges.reserve(3 * triangles + noise_edges);
  for (VertexId i = 0; i < triangles; ++i) {
    VertexId a = 3 * i, b = 3 * i + 1, c = 3 * i + 2;
    edges.push_back({a, b, 0});
    edges.push_back({b, c, 0});
    edges.push_back({a, c, 0});
  }
  std::uniform_int_distribution<VertexId> pick_v(0, static_cast<VertexId>(vertices - 1));
  for (size_t i = 0; i < noise_edges; ++i) {
    VertexId a = pick_v(rng), b = pick_v(rng);
    if (a == b) continue;
    edges.push_back({a, b, 0});
  }
  return Graph(std::vector<LabelId>(vertices, 0), std::move(edges), {"P"}, {"E"});
}

std::vector<QueryGraph> random_walk_queries(const Graph& g, size_t count, size_t max_vertices,
                                            uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick_v(0, static_cast<VertexId>(g.vertex_count() - 1));
  std::vector<QueryGraph> out;
  size_t attempts = 0;
  while (out.size() < count && attempts < count * 50) {
    ++attempts;
    // walk until max_vertices distinct vertices are collected
    std::vector<VertexId> picked;
    VertexId cur = pick_v(rng);
    picked.push_back(cur);
    for (size_t hops = 0; picked.size() < max_vertices && hops < max_vertices * 8; ++hops) {
      // one uniformly chosen neighbor over both directions, all labels
      std::vector<VertexId> nbrs;
      for (Dir dir : {Dir::Forward, Dir::Backward})
        for (LabelId el = 0; el < g.edge_label_count(); ++el)
          for (LabelId dl = 0; dl < g.vertex_label_count(); ++dl)
            for (VertexId v : g.neighbors(cur, dir, el, dl))
              if (v != cur) nbrs.push_back(v);
      if (nbrs.empty()) break;
      cur = nbrs[rng() % nbrs.size()];
      if (std::find(picked.begin(), picked.end(), cur) == picked.end()) picked.push_back(cur);
    }
    if (picked.size() < 2) continue;

    // close the picked set under induced data edges, keeping the pattern
    // simple: one query edge per unordered pair (first orientation and label
    // found), since the catalogue's extension entries carry at most one
    // descriptor per prefix vertex and cannot be exact on parallel edges
    std::vector<QueryVertex> qvs;
    for (size_t i = 0; i < picked.size(); ++i)
      qvs.push_back({"v" + std::to_string(i), g.vertex_label_name(g.vertex_label(picked[i]))});
    std::vector<QueryEdge> qes;
    for (uint32_t i = 0; i < picked.size(); ++i) {
      for (uint32_t j = i + 1; j < picked.size(); ++j) {
        bool done = false;
        for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
          for (LabelId el = 0; el < g.edge_label_count() && !done; ++el) {
            NeighborList nl =
                g.neighbors(picked[a], Dir::Forward, el, g.vertex_label(picked[b]));
            if (std::binary_search(nl.begin(), nl.end(), picked[b])) {
              qes.push_back({a, b, g.edge_label_name(el)});
              done = true;
            }
          }
          if (done) break;
        }
      }
    }
    if (qes.empty()) continue;
    QueryGraph q(std::move(qvs), std::move(qes));
    if (!q.connected()) continue;
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace sgq
