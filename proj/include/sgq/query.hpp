#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgq/common.hpp"

namespace sgq {

constexpr const char* kDefaultQueryLabel = "_";

struct QueryVertex {
  std::string name;
  std::string label;  // vertex label name; kDefaultQueryLabel if omitted
  bool operator==(const QueryVertex&) const = default;
};

struct QueryEdge {
  uint32_t src;  // indices into vertices()
  uint32_t dst;
  std::string label;  // edge label name
  bool operator==(const QueryEdge&) const = default;
};

struct CanonicalKey {
  std::string encoding;
  // canonical position of each original vertex index
  std::vector<uint32_t> permutation;
  auto operator<=>(const CanonicalKey& o) const { return encoding <=> o.encoding; }
  bool operator==(const CanonicalKey& o) const { return encoding == o.encoding; }
  std::string hex() const;
};

// Directed, connected, labeled pattern. Vertices are totally ordered by first
// appearance in the pattern text, so orderings can be stored as index
// permutations.
class QueryGraph {
 public:
  QueryGraph() = default;
  QueryGraph(std::vector<QueryVertex> vertices, std::vector<QueryEdge> edges);

  // Grammar: comma-separated `(name[:VLABEL])-[:ELABEL]->(name[:VLABEL])`.
  // Errors carry 1-based character offsets.
  static QueryGraph parse(const std::string& text);

  const std::vector<QueryVertex>& vertices() const { return vertices_; }
  const std::vector<QueryEdge>& edges() const { return edges_; }
  size_t size() const { return vertices_.size(); }

  std::optional<uint32_t> find_vertex(const std::string& name) const;

  // Induced subgraph on the given vertex indices. The result keeps the
  // relative vertex order and may be disconnected; callers that require
  // connectivity must check it.
  QueryGraph project(const std::vector<uint32_t>& subset) const;
  // Induced subgraph with vertices in exactly the given order (no sorting).
  QueryGraph project_ordered(const std::vector<uint32_t>& order) const;

  bool connected() const;
  // Connectivity of an arbitrary vertex subset in the induced sense.
  bool subset_connected(const std::vector<uint32_t>& subset) const;

  // Isomorphism-class key via minimum-encoding search over all vertex
  // permutations; intended for small patterns only. A distinguished vertex
  // (catalogue extension target) is pinned by the encoding.
  CanonicalKey canonicalize(std::optional<uint32_t> distinguished = std::nullopt) const;

  // Edge indices incident to vertex v (either endpoint).
  std::vector<uint32_t> incident_edges(uint32_t v) const;
  bool has_edge(uint32_t src, uint32_t dst, const std::string& label) const;

  std::string pattern_text() const;

 private:
  void validate() const;
  std::vector<QueryVertex> vertices_;
  std::vector<QueryEdge> edges_;
};

}  // namespace sgq
