#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "sgq/graph.hpp"
#include "sgq/query.hpp"

namespace sgq::test {

// Four vertices labeled P, five E-edges: 0->1, 0->2, 1->2, 1->3, 2->3.
// The asymmetric triangle has matches (0,1,2) and (1,2,3); the diamond-X has
// the single match (0,1,2,3).
inline Graph g0() {
  std::vector<LabelId> vlabels{0, 0, 0, 0};
  std::vector<EdgeRecord> edges{{0, 1, 0}, {0, 2, 0}, {1, 2, 0}, {1, 3, 0}, {2, 3, 0}};
  return Graph(std::move(vlabels), std::move(edges), {"P"}, {"E"});
}

inline const char* triangle_text() {
  return "(a1:P)-[:E]->(a2:P),(a2:P)-[:E]->(a3:P),(a1:P)-[:E]->(a3:P)";
}

inline const char* diamond_x_text() {
  return "(a1:P)-[:E]->(a2:P),(a1:P)-[:E]->(a3:P),(a2:P)-[:E]->(a3:P),"
         "(a2:P)-[:E]->(a4:P),(a3:P)-[:E]->(a4:P)";
}

inline Graph graph_from_csv(const std::string& vertices_csv, const std::string& edges_csv,
                            bool header = false) {
  std::istringstream v(vertices_csv), e(edges_csv);
  return Graph::load(v, e, header);
}

}  // namespace sgq::test
