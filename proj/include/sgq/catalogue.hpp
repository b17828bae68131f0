#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "sgq/graph.hpp"
#include "sgq/query.hpp"

namespace sgq {

// Names one adjacency list to intersect: the list of the already-matched
// pattern vertex `idx`, in direction `dir`, under `edge_label`. Forward means
// the pattern has an edge idx->new, backward new->idx.
struct Descriptor {
  uint32_t idx;
  Dir dir;
  std::string edge_label;
  auto operator<=>(const Descriptor&) const = default;
};

struct CatalogueEntry {
  double mu = 0.0;  // average extensions per input match
  uint64_t sample_support = 0;
  // average accessed list size per canonicalized descriptor
  std::map<std::tuple<uint32_t, uint8_t, std::string>, double> avg_sizes;
  bool operator==(const CatalogueEntry&) const = default;
};

struct LookupResult {
  bool found = false;
  double mu = 0.0;
  uint64_t support = 0;
  std::vector<double> avg_sizes;  // aligned with the caller's descriptor order
};

struct MuEstimate {
  double mu = 1.0;
  bool low_confidence = false;
};

struct ExtensionEstimate {
  double mu = 0.0;
  std::vector<double> list_sizes;  // aligned with the caller's descriptor order
  uint64_t support = 0;
  bool low_confidence = false;
};

// Sampled statistics for extending connected subgraphs of at most h vertices
// by one vertex, plus exact per-label edge counts.
class Catalogue {
 public:
  Catalogue() = default;

  static Catalogue build(const Graph& g, size_t h = 3, size_t z = 1000, uint64_t seed = 0);

  size_t h() const { return h_; }
  size_t z() const { return z_; }
  uint64_t seed() const { return seed_; }
  size_t entry_count() const { return entries_.size(); }
  const std::map<std::string, CatalogueEntry>& entries() const { return entries_; }

  uint64_t base_count(const std::string& edge_label, const std::string& src_label,
                      const std::string& dst_label) const;
  uint64_t vertex_count(const std::string& vertex_label) const;

  LookupResult lookup(const QueryGraph& qk_minus_1, const std::vector<Descriptor>& a,
                      const std::string& lk) const;

  // Stored mu when present; otherwise the minimum mu over vertex-removal
  // reductions, recursively, with a low-confidence fallback of 1.0.
  MuEstimate estimate_mu(const QueryGraph& qk_minus_1, const std::vector<Descriptor>& a,
                         const std::string& lk) const;

  // mu plus per-descriptor list-size estimates for cost formulas; sizes fall
  // back to label-level average degrees when the entry is missing.
  ExtensionEstimate estimate_extension(const QueryGraph& qk_minus_1,
                                       const std::vector<Descriptor>& a,
                                       const std::string& lk) const;

  struct CardinalityEstimate {
    double value = 0.0;
    bool low_confidence = false;
  };
  CardinalityEstimate estimate_cardinality(const QueryGraph& q) const;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static Catalogue load(std::istream& in);
  static Catalogue load_file(const std::string& path);

  bool operator==(const Catalogue& o) const {
    return h_ == o.h_ && z_ == o.z_ && seed_ == o.seed_ && entries_ == o.entries_ &&
           base_counts_ == o.base_counts_ && vertex_counts_ == o.vertex_counts_;
  }

  // Builds the (k)-vertex pattern that extends p by one `lk`-labeled vertex
  // along the descriptors in a. The new vertex is appended last.
  static QueryGraph extension_pattern(const QueryGraph& p, const std::vector<Descriptor>& a,
                                      const std::string& lk);

 private:
  double fallback_list_size(const QueryGraph& p, const Descriptor& d, const std::string& lk) const;

  size_t h_ = 3;
  size_t z_ = 1000;
  uint64_t seed_ = 0;
  std::map<std::string, CatalogueEntry> entries_;  // key: canonical hex
  std::map<std::tuple<std::string, std::string, std::string>, uint64_t> base_counts_;
  std::map<std::string, uint64_t> vertex_counts_;
};

}  // namespace sgq
