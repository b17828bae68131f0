#include "sgq/oracle.hpp"

#include <algorithm>

namespace sgq {

namespace {

struct Backtracker {
  const QueryGraph& q;
  const Graph& g;
  Semantics semantics;
  std::vector<VertexId> assignment;
  std::vector<bool> assigned;
  uint64_t count = 0;

  bool label_ok(uint32_t qv, VertexId v) const {
    const std::string& want = q.vertices()[qv].label;
    return g.vertex_label(v) == g.find_vertex_label(want);
  }

  bool edges_ok(uint32_t qv, VertexId v) const {
    for (const auto& e : q.edges()) {
      if (e.src == qv && assigned[e.dst]) {
        if (!has_data_edge(v, assignment[e.dst], e.label)) return false;
      }
      if (e.dst == qv && assigned[e.src]) {
        if (!has_data_edge(assignment[e.src], v, e.label)) return false;
      }
      if (e.src == qv && e.dst == qv) {
        if (!has_data_edge(v, v, e.label)) return false;
      }
    }
    return true;
  }

  bool has_data_edge(VertexId a, VertexId b, const std::string& label) const {
    auto el = g.find_edge_label(label);
    if (!el) return false;
    NeighborList list = g.neighbors(a, Dir::Forward, *el, g.vertex_label(b));
    return std::binary_search(list.begin(), list.end(), b);
  }

  void recurse(uint32_t qv) {
    if (qv == q.size()) {
      ++count;
      return;
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (semantics == Semantics::Injective) {
        bool used = false;
        for (uint32_t i = 0; i < qv; ++i) used |= assignment[i] == v;
        if (used) continue;
      }
      if (!label_ok(qv, v)) continue;
      assignment[qv] = v;
      assigned[qv] = true;
      if (edges_ok(qv, v)) recurse(qv + 1);
      assigned[qv] = false;
    }
  }
};

}  // namespace

uint64_t brute_force_count(const QueryGraph& q, const Graph& g, Semantics semantics, bool force,
                           size_t max_vertices) {
  if (q.size() > max_vertices && !force)
    throw GuardError("pattern has " + std::to_string(q.size()) +
                     " vertices; exhaustive counting refused without force");
  Backtracker bt{q, g, semantics};
  bt.assignment.resize(q.size());
  bt.assigned.resize(q.size(), false);
  bt.recurse(0);
  return bt.count;
}

double q_error(double est, double truth) {
  if (est == 0.0 && truth == 0.0) return 1.0;
  if (est <= 0.0 || truth <= 0.0) return kQErrorInfinite;
  return std::max(est / truth, truth / est);
}

}  // namespace sgq
