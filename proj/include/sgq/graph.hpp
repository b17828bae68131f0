#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "sgq/common.hpp"

namespace sgq {

struct NeighborList {
  const VertexId* ids = nullptr;
  size_t len = 0;

  const VertexId* begin() const { return ids; }
  const VertexId* end() const { return ids + len; }
  bool empty() const { return len == 0; }
  VertexId operator[](size_t i) const { return ids[i]; }
};

struct EdgeRecord {
  VertexId src;
  VertexId dst;
  LabelId label;
  auto operator<=>(const EdgeRecord&) const = default;
};

// Immutable vertex/edge store. Both directions are indexed; each adjacency
// partition (vertex, direction, edge label, neighbor vertex label) is sorted
// ascending by neighbor id and duplicate-free.
class Graph {
 public:
  // Builds from already-resolved integer data. Duplicate edges are dropped
  // (counted in duplicate_edge_count), self-loops are kept.
  Graph(std::vector<LabelId> vertex_labels, std::vector<EdgeRecord> edges,
        std::vector<std::string> vertex_label_names, std::vector<std::string> edge_label_names);

  // CSV ingestion: vertex rows `id,label` (label optional), edge rows
  // `src,dst,label` (label optional). Throws ParseError / ValidationError.
  static Graph load(std::istream& vertices, std::istream& edges, bool skip_header);
  static Graph load_files(const std::string& vertices_path, const std::string& edges_path,
                          bool skip_header);

  size_t vertex_count() const { return vertex_labels_.size(); }
  size_t edge_count() const { return edge_count_; }
  size_t duplicate_edge_count() const { return duplicate_edge_count_; }

  size_t vertex_label_count() const { return vertex_label_names_.size(); }
  size_t edge_label_count() const { return edge_label_names_.size(); }
  LabelId vertex_label(VertexId v) const { return vertex_labels_[v]; }

  const std::string& vertex_label_name(LabelId l) const { return vertex_label_names_[l]; }
  const std::string& edge_label_name(LabelId l) const { return edge_label_names_[l]; }
  // Unknown names yield nullopt; queries over labels absent from the data
  // simply have zero matches.
  std::optional<LabelId> find_vertex_label(const std::string& name) const;
  std::optional<LabelId> find_edge_label(const std::string& name) const;

  NeighborList neighbors(VertexId v, Dir dir, LabelId edge_label, LabelId dest_label) const;
  // Total list length for (v, dir, edge_label) over all destination labels.
  size_t degree(VertexId v, Dir dir, LabelId edge_label) const;

  uint64_t edge_label_count_for(LabelId edge_label, LabelId src_label, LabelId dst_label) const;
  uint64_t vertex_count_for(LabelId vertex_label) const;
  const std::map<std::tuple<LabelId, LabelId, LabelId>, uint64_t>& edge_label_counts() const {
    return edge_label_counts_;
  }

  // z edges drawn uniformly with replacement from the (edge_label, src_label,
  // dst_label) population; deterministic under seed. Populations of size <= z
  // are returned exhaustively, each edge once.
  std::vector<EdgeRecord> sample_edges(size_t z, LabelId edge_label, LabelId src_label,
                                       LabelId dst_label, uint64_t seed) const;

 private:
  size_t partition_index(VertexId v, LabelId edge_label, LabelId dest_label) const {
    return (static_cast<size_t>(v) * edge_label_names_.size() + edge_label) *
               vertex_label_names_.size() +
           dest_label;
  }

  std::vector<LabelId> vertex_labels_;
  std::vector<std::string> vertex_label_names_;
  std::vector<std::string> edge_label_names_;
  std::unordered_map<std::string, LabelId> vertex_label_ids_;
  std::unordered_map<std::string, LabelId> edge_label_ids_;

  // offsets_[dir] has vertex_count * edge_labels * vertex_labels + 1 entries
  // into flat_[dir]; partition lookup is pure arithmetic.
  std::vector<uint64_t> offsets_[2];
  std::vector<VertexId> flat_[2];

  std::map<std::tuple<LabelId, LabelId, LabelId>, uint64_t> edge_label_counts_;
  std::vector<uint64_t> vertex_label_counts_;
  size_t edge_count_ = 0;
  size_t duplicate_edge_count_ = 0;
};

}  // namespace sgq
