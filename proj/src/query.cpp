#include "sgq/query.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace sgq {

namespace {

bool name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

struct Cursor {
  const std::string& text;
  size_t pos = 0;  // 0-based

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  void expect(char c, const char* what) {
    if (peek() != c) throw ParseError(std::string("expected ") + what, pos + 1);
    ++pos;
  }
  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  std::string ident(const char* what) {
    size_t start = pos;
    while (pos < text.size() && name_char(text[pos])) ++pos;
    if (pos == start) throw ParseError(std::string("expected ") + what, pos + 1);
    return text.substr(start, pos - start);
  }
};

}  // namespace

QueryGraph::QueryGraph(std::vector<QueryVertex> vertices, std::vector<QueryEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  validate();
}

void QueryGraph::validate() const {
  std::set<std::string> names;
  for (const auto& v : vertices_) {
    if (!names.insert(v.name).second)
      throw ValidationError("duplicate query vertex name '" + v.name + "'");
  }
  std::set<std::tuple<uint32_t, uint32_t, std::string>> seen;
  for (const auto& e : edges_) {
    if (e.src >= vertices_.size() || e.dst >= vertices_.size())
      throw ValidationError("edge endpoint out of range");
    if (!seen.insert({e.src, e.dst, e.label}).second)
      throw ValidationError("duplicate query edge (" + vertices_[e.src].name + ")-[:" + e.label +
                            "]->(" + vertices_[e.dst].name + ")");
  }
  if (!connected()) throw ValidationError("query pattern is disconnected");
}

QueryGraph QueryGraph::parse(const std::string& text) {
  Cursor c{text};
  std::vector<QueryVertex> vertices;
  std::vector<QueryEdge> edges;
  std::vector<std::string> order;

  auto vertex_ref = [&]() -> uint32_t {
    c.skip_ws();
    size_t at = c.pos + 1;
    c.expect('(', "'('");
    std::string name = c.ident("vertex name");
    std::string label = kDefaultQueryLabel;
    if (c.peek() == ':') {
      ++c.pos;
      label = c.ident("vertex label");
    }
    c.expect(')', "')'");
    for (uint32_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i].name == name) {
        if (vertices[i].label == kDefaultQueryLabel && label != kDefaultQueryLabel)
          vertices[i].label = label;
        else if (label != kDefaultQueryLabel && vertices[i].label != label)
          throw ParseError("conflicting labels for vertex '" + name + "'", at);
        return i;
      }
    }
    vertices.push_back({name, label});
    return static_cast<uint32_t>(vertices.size() - 1);
  };

  while (true) {
    uint32_t src = vertex_ref();
    c.skip_ws();
    c.expect('-', "'-['");
    c.expect('[', "'-['");
    std::string elabel = kDefaultQueryLabel;
    if (c.peek() == ':') {
      ++c.pos;
      elabel = c.ident("edge label");
    }
    c.expect(']', "']'");
    c.expect('-', "']->'");
    c.expect('>', "']->'");
    uint32_t dst = vertex_ref();
    edges.push_back({src, dst, elabel});
    c.skip_ws();
    if (c.peek() == '\0') break;
    c.expect(',', "',' or end of pattern");
  }

  return QueryGraph(std::move(vertices), std::move(edges));
}

std::optional<uint32_t> QueryGraph::find_vertex(const std::string& name) const {
  for (uint32_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].name == name) return i;
  return std::nullopt;
}

QueryGraph QueryGraph::project(const std::vector<uint32_t>& subset) const {
  if (subset.empty()) throw ValidationError("projection subset is empty");
  std::vector<uint32_t> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<uint32_t> remap(vertices_.size(), UINT32_MAX);
  std::vector<QueryVertex> vs;
  for (uint32_t v : sorted) {
    if (v >= vertices_.size()) throw ValidationError("projection subset references unknown vertex");
    remap[v] = static_cast<uint32_t>(vs.size());
    vs.push_back(vertices_[v]);
  }
  std::vector<QueryEdge> es;
  for (const auto& e : edges_) {
    if (remap[e.src] != UINT32_MAX && remap[e.dst] != UINT32_MAX)
      es.push_back({remap[e.src], remap[e.dst], e.label});
  }
  QueryGraph out;
  out.vertices_ = std::move(vs);
  out.edges_ = std::move(es);
  return out;  // bypasses connectivity validation on purpose
}

QueryGraph QueryGraph::project_ordered(const std::vector<uint32_t>& order) const {
  if (order.empty()) throw ValidationError("projection subset is empty");
  std::vector<uint32_t> remap(vertices_.size(), UINT32_MAX);
  std::vector<QueryVertex> vs;
  for (uint32_t v : order) {
    if (v >= vertices_.size() || remap[v] != UINT32_MAX)
      throw ValidationError("bad projection order");
    remap[v] = static_cast<uint32_t>(vs.size());
    vs.push_back(vertices_[v]);
  }
  std::vector<QueryEdge> es;
  for (const auto& e : edges_) {
    if (remap[e.src] != UINT32_MAX && remap[e.dst] != UINT32_MAX)
      es.push_back({remap[e.src], remap[e.dst], e.label});
  }
  QueryGraph out;
  out.vertices_ = std::move(vs);
  out.edges_ = std::move(es);
  return out;
}

bool QueryGraph::connected() const {
  std::vector<uint32_t> all(vertices_.size());
  std::iota(all.begin(), all.end(), 0);
  return subset_connected(all);
}

bool QueryGraph::subset_connected(const std::vector<uint32_t>& subset) const {
  if (subset.empty()) return false;
  std::set<uint32_t> in(subset.begin(), subset.end());
  std::vector<uint32_t> stack{subset[0]};
  std::set<uint32_t> seen{subset[0]};
  while (!stack.empty()) {
    uint32_t v = stack.back();
    stack.pop_back();
    for (const auto& e : edges_) {
      uint32_t other;
      if (e.src == v)
        other = e.dst;
      else if (e.dst == v)
        other = e.src;
      else
        continue;
      if (in.count(other) && !seen.count(other)) {
        seen.insert(other);
        stack.push_back(other);
      }
    }
  }
  return seen.size() == in.size();
}

std::vector<uint32_t> QueryGraph::incident_edges(uint32_t v) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].src == v || edges_[i].dst == v) out.push_back(i);
  return out;
}

bool QueryGraph::has_edge(uint32_t src, uint32_t dst, const std::string& label) const {
  for (const auto& e : edges_)
    if (e.src == src && e.dst == dst && e.label == label) return true;
  return false;
}

CanonicalKey QueryGraph::canonicalize(std::optional<uint32_t> distinguished) const {
  const uint32_t n = static_cast<uint32_t>(vertices_.size());
  if (distinguished && *distinguished >= n)
    throw ValidationError("distinguished vertex out of range");
  std::vector<uint32_t> perm(n);  // perm[original] = canonical position
  std::iota(perm.begin(), perm.end(), 0);

  auto encode = [&](const std::vector<uint32_t>& p) {
    std::vector<const std::string*> labels(n);
    for (uint32_t i = 0; i < n; ++i) labels[p[i]] = &vertices_[i].label;
    std::vector<std::tuple<uint32_t, uint32_t, std::string>> es;
    es.reserve(edges_.size());
    for (const auto& e : edges_) es.emplace_back(p[e.src], p[e.dst], e.label);
    std::sort(es.begin(), es.end());
    std::string out;
    out.push_back(static_cast<char>(n));
    for (uint32_t i = 0; i < n; ++i) {
      out += *labels[i];
      out.push_back('\x01');
    }
    for (const auto& [s, d, l] : es) {
      out.push_back(static_cast<char>(s));
      out.push_back(static_cast<char>(d));
      out += l;
      out.push_back('\x01');
    }
    return out;
  };

  std::string best;
  std::vector<uint32_t> best_perm;
  std::sort(perm.begin(), perm.end());
  do {
    // the distinguished vertex is pinned to the last canonical position
    if (distinguished && perm[*distinguished] != n - 1) continue;
    std::string enc = encode(perm);
    if (best.empty() || enc < best) {
      best = enc;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  return CanonicalKey{std::move(best), std::move(best_perm)};
}

std::string CanonicalKey::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(encoding.size() * 2);
  for (unsigned char c : encoding) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

std::string QueryGraph::pattern_text() const {
  std::ostringstream out;
  for (size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (i) out << ",";
    out << "(" << vertices_[e.src].name;
    if (vertices_[e.src].label != kDefaultQueryLabel) out << ":" << vertices_[e.src].label;
    out << ")-[";
    if (e.label != kDefaultQueryLabel) out << ":" << e.label;
    out << "]->(" << vertices_[e.dst].name;
    if (vertices_[e.dst].label != kDefaultQueryLabel) out << ":" << vertices_[e.dst].label;
    out << ")";
  }
  return out.str();
}

}  // namespace sgq
