#include "sgq/graph.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace sgq {

namespace {

constexpr const char* kDefaultLabel = "_";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

uint64_t parse_id(const std::string& s, size_t line_no) {
  if (s.empty()) throw ParseError("empty id field", line_no);
  uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError("malformed id '" + s + "'", line_no);
    v = v * 10 + static_cast<uint64_t>(c - '0');
  }
  return v;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Graph::Graph(std::vector<LabelId> vertex_labels, std::vector<EdgeRecord> edges,
             std::vector<std::string> vertex_label_names, std::vector<std::string> edge_label_names)
    : vertex_labels_(std::move(vertex_labels)),
      vertex_label_names_(std::move(vertex_label_names)),
      edge_label_names_(std::move(edge_label_names)) {
  if (vertex_label_names_.empty()) vertex_label_names_.push_back(kDefaultLabel);
  if (edge_label_names_.empty()) edge_label_names_.push_back(kDefaultLabel);
  for (LabelId i = 0; i < vertex_label_names_.size(); ++i) vertex_label_ids_[vertex_label_names_[i]] = i;
  for (LabelId i = 0; i < edge_label_names_.size(); ++i) edge_label_ids_[edge_label_names_[i]] = i;

  vertex_label_counts_.assign(vertex_label_names_.size(), 0);
  for (LabelId l : vertex_labels_) ++vertex_label_counts_[l];

  std::sort(edges.begin(), edges.end());
  std::vector<EdgeRecord> unique_edges;
  unique_edges.reserve(edges.size());
  for (const EdgeRecord& e : edges) {
    if (!unique_edges.empty() && unique_edges.back() == e) {
      ++duplicate_edge_count_;
      continue;
    }
    unique_edges.push_back(e);
  }
  edge_count_ = unique_edges.size();

  for (const EdgeRecord& e : unique_edges) {
    ++edge_label_counts_[{e.label, vertex_labels_[e.src], vertex_labels_[e.dst]}];
  }

  const size_t parts =
      vertex_labels_.size() * edge_label_names_.size() * vertex_label_names_.size();
  for (int d = 0; d < 2; ++d) {
    std::vector<uint64_t> counts(parts + 1, 0);
    for (const EdgeRecord& e : unique_edges) {
      VertexId v = d == 0 ? e.src : e.dst;
      VertexId w = d == 0 ? e.dst : e.src;
      ++counts[partition_index(v, e.label, vertex_labels_[w]) + 1];
    }
    for (size_t i = 1; i <= parts; ++i) counts[i] += counts[i - 1];
    offsets_[d] = counts;
    flat_[d].resize(unique_edges.size());
    std::vector<uint64_t> cursor(offsets_[d].begin(), offsets_[d].end() - 1);
    for (const EdgeRecord& e : unique_edges) {
      VertexId v = d == 0 ? e.src : e.dst;
      VertexId w = d == 0 ? e.dst : e.src;
      flat_[d][cursor[partition_index(v, e.label, vertex_labels_[w])]++] = w;
    }
    for (size_t p = 0; p < parts; ++p) {
      std::sort(flat_[d].begin() + static_cast<ptrdiff_t>(offsets_[d][p]),
                flat_[d].begin() + static_cast<ptrdiff_t>(offsets_[d][p + 1]));
    }
  }
}

Graph Graph::load(std::istream& vertices, std::istream& edges, bool skip_header) {
  std::vector<std::string> vertex_label_names;
  std::unordered_map<std::string, LabelId> vertex_label_ids;
  std::vector<std::string> edge_label_names;
  std::unordered_map<std::string, LabelId> edge_label_ids;
  auto intern = [](std::vector<std::string>& names, std::unordered_map<std::string, LabelId>& ids,
                   const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    LabelId id = static_cast<LabelId>(names.size());
    names.push_back(name);
    ids[name] = id;
    return id;
  };

  std::unordered_map<uint64_t, VertexId> vertex_ids;
  std::vector<LabelId> vertex_labels;
  std::string line;
  size_t line_no = 0;
  bool first = true;
  while (std::getline(vertices, line)) {
    ++line_no;
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    std::string t = trim(line);
    if (t.empty()) continue;
    auto fields = split_csv(t);
    if (fields.size() > 2) throw ParseError("expected `id[,label]` row", line_no);
    uint64_t id = parse_id(trim(fields[0]), line_no);
    std::string label = fields.size() == 2 ? trim(fields[1]) : kDefaultLabel;
    if (label.empty()) label = kDefaultLabel;
    if (vertex_ids.count(id)) throw ParseError("duplicate vertex id " + std::to_string(id), line_no);
    VertexId dense = static_cast<VertexId>(vertex_labels.size());
    vertex_ids[id] = dense;
    vertex_labels.push_back(intern(vertex_label_names, vertex_label_ids, label));
  }

  std::vector<EdgeRecord> edge_records;
  line_no = 0;
  first = true;
  while (std::getline(edges, line)) {
    ++line_no;
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    std::string t = trim(line);
    if (t.empty()) continue;
    auto fields = split_csv(t);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError("expected `src,dst[,label]` row", line_no);
    uint64_t src = parse_id(trim(fields[0]), line_no);
    uint64_t dst = parse_id(trim(fields[1]), line_no);
    std::string label = fields.size() == 3 ? trim(fields[2]) : kDefaultLabel;
    if (label.empty()) label = kDefaultLabel;
    auto si = vertex_ids.find(src);
    auto di = vertex_ids.find(dst);
    if (si == vertex_ids.end())
      throw ValidationError("edge references unknown vertex " + std::to_string(src) + " at line " +
                            std::to_string(line_no));
    if (di == vertex_ids.end())
      throw ValidationError("edge references unknown vertex " + std::to_string(dst) + " at line " +
                            std::to_string(line_no));
    edge_records.push_back(
        {si->second, di->second, intern(edge_label_names, edge_label_ids, label)});
  }

  return Graph(std::move(vertex_labels), std::move(edge_records), std::move(vertex_label_names),
               std::move(edge_label_names));
}

Graph Graph::load_files(const std::string& vertices_path, const std::string& edges_path,
                        bool skip_header) {
  std::ifstream vf(vertices_path);
  if (!vf) throw IoError("cannot open " + vertices_path);
  std::ifstream ef(edges_path);
  if (!ef) throw IoError("cannot open " + edges_path);
  return load(vf, ef, skip_header);
}

std::optional<LabelId> Graph::find_vertex_label(const std::string& name) const {
  auto it = vertex_label_ids_.find(name);
  if (it == vertex_label_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<LabelId> Graph::find_edge_label(const std::string& name) const {
  auto it = edge_label_ids_.find(name);
  if (it == edge_label_ids_.end()) return std::nullopt;
  return it->second;
}

NeighborList Graph::neighbors(VertexId v, Dir dir, LabelId edge_label, LabelId dest_label) const {
  const int d = dir == Dir::Forward ? 0 : 1;
  const size_t p = partition_index(v, edge_label, dest_label);
  return {flat_[d].data() + offsets_[d][p], static_cast<size_t>(offsets_[d][p + 1] - offsets_[d][p])};
}

size_t Graph::degree(VertexId v, Dir dir, LabelId edge_label) const {
  const int d = dir == Dir::Forward ? 0 : 1;
  const size_t first = partition_index(v, edge_label, 0);
  const size_t last = first + vertex_label_names_.size();
  return static_cast<size_t>(offsets_[d][last] - offsets_[d][first]);
}

uint64_t Graph::edge_label_count_for(LabelId edge_label, LabelId src_label,
                                     LabelId dst_label) const {
  auto it = edge_label_counts_.find({edge_label, src_label, dst_label});
  return it == edge_label_counts_.end() ? 0 : it->second;
}

uint64_t Graph::vertex_count_for(LabelId vertex_label) const {
  return vertex_label < vertex_label_counts_.size() ? vertex_label_counts_[vertex_label] : 0;
}

std::vector<EdgeRecord> Graph::sample_edges(size_t z, LabelId edge_label, LabelId src_label,
                                            LabelId dst_label, uint64_t seed) const {
  std::vector<EdgeRecord> population;
  for (VertexId v = 0; v < vertex_labels_.size(); ++v) {
    if (vertex_labels_[v] != src_label) continue;
    NeighborList list = neighbors(v, Dir::Forward, edge_label, dst_label);
    for (VertexId w : list) population.push_back({v, w, edge_label});
  }
  if (population.empty() || population.size() <= z) return population;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, population.size() - 1);
  std::vector<EdgeRecord> out;
  out.reserve(z);
  for (size_t i = 0; i < z; ++i) out.push_back(population[pick(rng)]);
  return out;
}

}  // namespace sgq
