#include "sgq/catalogue.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "sgq/intersect.hpp"

namespace sgq {

namespace {

uint64_t derive_seed(uint64_t seed, const std::string& a, const std::string& b,
                     const std::string& c) {
  uint64_t h = 14695981039346656037ull ^ seed;
  auto mix = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  mix(a);
  mix(b);
  mix(c);
  return h;
}

QueryGraph reorder_pattern(const QueryGraph& p, const std::vector<uint32_t>& perm) {
  // perm[i] = new position of vertex i
  std::vector<uint32_t> order(p.size());
  for (uint32_t i = 0; i < p.size(); ++i) order[perm[i]] = i;
  return p.project_ordered(order);
}

std::string format_double(double v) {
  char buf[64];
  snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct BuildClass {
  QueryGraph pattern;  // in canonical vertex order
  std::vector<std::vector<VertexId>> matches;
  uint64_t parent_support = 0;
  std::string parent_key;
};

}  // namespace

QueryGraph Catalogue::extension_pattern(const QueryGraph& p, const std::vector<Descriptor>& a,
                                        const std::string& lk) {
  std::vector<QueryVertex> vs = p.vertices();
  std::vector<QueryEdge> es = p.edges();
  std::string fresh = "@x";
  while (p.find_vertex(fresh)) fresh += "x";
  uint32_t nv = static_cast<uint32_t>(vs.size());
  vs.push_back({fresh, lk});
  for (const Descriptor& d : a) {
    if (d.idx >= nv) throw ValidationError("descriptor references unknown pattern vertex");
    if (d.dir == Dir::Forward)
      es.push_back({d.idx, nv, d.edge_label});
    else
      es.push_back({nv, d.idx, d.edge_label});
  }
  // connected iff a is nonempty, which callers guarantee
  return QueryGraph(std::move(vs), std::move(es));
}

Catalogue Catalogue::build(const Graph& g, size_t h, size_t z, uint64_t seed) {
  if (h < 2) throw ValidationError("catalogue requires h >= 2");
  if (z < 1) throw ValidationError("catalogue requires z >= 1");
  Catalogue c;
  c.h_ = h;
  c.z_ = z;
  c.seed_ = seed;

  for (LabelId l = 0; l < g.vertex_label_count(); ++l)
    c.vertex_counts_[g.vertex_label_name(l)] = g.vertex_count_for(l);
  for (const auto& [key, count] : g.edge_label_counts()) {
    auto [el, sl, dl] = key;
    c.base_counts_[{g.edge_label_name(el), g.vertex_label_name(sl), g.vertex_label_name(dl)}] =
        count;
  }

  // level-2 classes seeded by edge sampling
  std::map<std::string, BuildClass> current;
  for (const auto& [key, count] : g.edge_label_counts()) {
    auto [el, sl, dl] = key;
    QueryGraph ep({{"v0", g.vertex_label_name(sl)}, {"v1", g.vertex_label_name(dl)}},
                  {{0, 1, g.edge_label_name(el)}});
    auto edges = g.sample_edges(
        z, el, sl, dl,
        derive_seed(seed, g.edge_label_name(el), g.vertex_label_name(sl), g.vertex_label_name(dl)));
    CanonicalKey ck = ep.canonicalize();
    std::vector<std::vector<VertexId>> matches;
    matches.reserve(edges.size());
    for (const auto& e : edges) {
      std::vector<VertexId> t(2);
      t[ck.permutation[0]] = e.src;
      t[ck.permutation[1]] = e.dst;
      matches.push_back(std::move(t));
    }
    auto& cls = current[ck.hex()];
    cls.pattern = reorder_pattern(ep, ck.permutation);
    cls.matches = std::move(matches);
    cls.parent_support = std::numeric_limits<uint64_t>::max();
  }

  std::vector<VertexId> buf, scratch;
  for (size_t s = 2; s <= h; ++s) {
    std::map<std::string, BuildClass> next;
    for (const auto& [cls_key, cls] : current) {
      // descriptor options per pattern vertex: none, or one (dir, edge label)
      std::vector<Descriptor> options;
      for (LabelId el = 0; el < g.edge_label_count(); ++el) {
        for (Dir dir : {Dir::Forward, Dir::Backward})
          options.push_back({0, dir, g.edge_label_name(el)});
      }
      const size_t per_vertex = options.size() + 1;  // + "no descriptor"
      size_t combos = 1;
      for (size_t i = 0; i < s; ++i) combos *= per_vertex;

      for (size_t combo = 1; combo < combos; ++combo) {
        std::vector<Descriptor> a;
        size_t rest = combo;
        for (uint32_t i = 0; i < s; ++i) {
          size_t pick = rest % per_vertex;
          rest /= per_vertex;
          if (pick == 0) continue;
          Descriptor d = options[pick - 1];
          d.idx = i;
          a.push_back(d);
        }
        for (LabelId lk = 0; lk < g.vertex_label_count(); ++lk) {
          const std::string& lk_name = g.vertex_label_name(lk);
          QueryGraph ep = extension_pattern(cls.pattern, a, lk_name);
          CanonicalKey ek = ep.canonicalize(static_cast<uint32_t>(s));
          std::string ekey = ek.hex();
          if (c.entries_.count(ekey)) continue;

          CatalogueEntry entry;
          entry.sample_support = cls.matches.size();
          std::vector<double> size_sums(a.size(), 0.0);
          double total_ext = 0.0;
          std::vector<std::vector<VertexId>> extended;
          std::vector<NeighborList> lists(a.size());
          std::vector<LabelId> el_ids(a.size());
          for (size_t d = 0; d < a.size(); ++d) el_ids[d] = *g.find_edge_label(a[d].edge_label);
          for (const auto& t : cls.matches) {
            for (size_t d = 0; d < a.size(); ++d) {
              lists[d] = g.neighbors(t[a[d].idx], a[d].dir, el_ids[d], lk);
              size_sums[d] += static_cast<double>(lists[d].len);
            }
            intersect(lists, buf, scratch);
            total_ext += static_cast<double>(buf.size());
            if (s < h && !buf.empty()) {
              for (VertexId v : buf) {
                std::vector<VertexId> et = t;
                et.push_back(v);
                extended.push_back(std::move(et));
              }
            }
          }
          const double denom = entry.sample_support ? static_cast<double>(entry.sample_support) : 1.0;
          entry.mu = total_ext / denom;
          for (size_t d = 0; d < a.size(); ++d) {
            entry.avg_sizes[{ek.permutation[a[d].idx], static_cast<uint8_t>(a[d].dir),
                             a[d].edge_label}] = size_sums[d] / denom;
          }
          c.entries_.emplace(ekey, std::move(entry));

          if (s < h && !extended.empty()) {
            CanonicalKey plain = ep.canonicalize();
            std::string pkey = plain.hex();
            uint64_t support = cls.matches.size();
            auto it = next.find(pkey);
            bool better = it == next.end() || support > it->second.parent_support ||
                          (support == it->second.parent_support && ekey < it->second.parent_key);
            if (better) {
              BuildClass nc;
              nc.pattern = reorder_pattern(ep, plain.permutation);
              nc.matches.reserve(extended.size());
              for (const auto& t : extended) {
                std::vector<VertexId> rt(t.size());
                for (uint32_t i = 0; i < t.size(); ++i) rt[plain.permutation[i]] = t[i];
                nc.matches.push_back(std::move(rt));
              }
              nc.parent_support = support;
              nc.parent_key = ekey;
              next[pkey] = std::move(nc);
            }
          }
        }
      }
    }
    current = std::move(next);
  }
  return c;
}

uint64_t Catalogue::base_count(const std::string& edge_label, const std::string& src_label,
                               const std::string& dst_label) const {
  auto it = base_counts_.find({edge_label, src_label, dst_label});
  return it == base_counts_.end() ? 0 : it->second;
}

uint64_t Catalogue::vertex_count(const std::string& vertex_label) const {
  auto it = vertex_counts_.find(vertex_label);
  return it == vertex_counts_.end() ? 0 : it->second;
}

LookupResult Catalogue::lookup(const QueryGraph& qk_minus_1, const std::vector<Descriptor>& a,
                               const std::string& lk) const {
  if (qk_minus_1.size() > h_ || a.empty()) return {};
  QueryGraph ep = extension_pattern(qk_minus_1, a, lk);
  CanonicalKey key = ep.canonicalize(static_cast<uint32_t>(qk_minus_1.size()));
  auto it = entries_.find(key.hex());
  if (it == entries_.end()) return {};
  LookupResult r;
  r.found = true;
  r.mu = it->second.mu;
  r.support = it->second.sample_support;
  r.avg_sizes.reserve(a.size());
  for (const Descriptor& d : a) {
    auto sit = it->second.avg_sizes.find(
        {key.permutation[d.idx], static_cast<uint8_t>(d.dir), d.edge_label});
    r.avg_sizes.push_back(sit == it->second.avg_sizes.end() ? 0.0 : sit->second);
  }
  return r;
}

MuEstimate Catalogue::estimate_mu(const QueryGraph& qk_minus_1, const std::vector<Descriptor>& a,
                                  const std::string& lk) const {
  if (a.empty()) return {1.0, true};
  if (qk_minus_1.size() <= h_) {
    LookupResult r = lookup(qk_minus_1, a, lk);
    if (r.found) return {r.mu, false};
  }
  if (qk_minus_1.size() <= 2) return {1.0, true};

  // remove enough vertices to get back into catalogue range (at least one),
  // skipping reductions that disconnect the pattern or drop every descriptor
  const size_t n = qk_minus_1.size();
  const size_t remove = n > h_ ? n - h_ : 1;

  std::vector<uint32_t> pick(remove);
  std::iota(pick.begin(), pick.end(), 0);
  bool found_any = false;
  double best = 0.0;
  std::vector<std::pair<QueryGraph, std::vector<Descriptor>>> recurse_on;
  while (true) {
    std::vector<bool> removed(n, false);
    for (uint32_t i : pick) removed[i] = true;
    std::vector<uint32_t> keep;
    for (uint32_t i = 0; i < n; ++i)
      if (!removed[i]) keep.push_back(i);

    std::vector<Descriptor> reduced;
    for (const Descriptor& d : a) {
      if (removed[d.idx]) continue;
      Descriptor rd = d;
      rd.idx = static_cast<uint32_t>(
          std::lower_bound(keep.begin(), keep.end(), d.idx) - keep.begin());
      reduced.push_back(rd);
    }
    if (!reduced.empty() && qk_minus_1.subset_connected(keep)) {
      QueryGraph qy = qk_minus_1.project_ordered(keep);
      LookupResult r = lookup(qy, reduced, lk);
      if (r.found) {
        best = found_any ? std::min(best, r.mu) : r.mu;
        found_any = true;
      } else {
        recurse_on.emplace_back(std::move(qy), std::move(reduced));
      }
    }

    // next r-combination in lexicographic order
    bool advanced = false;
    for (size_t i = remove; i-- > 0;) {
      if (pick[i] + (remove - i) < n) {
        ++pick[i];
        for (size_t j = i + 1; j < remove; ++j) pick[j] = pick[j - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  if (found_any) return {best, false};

  for (const auto& [qy, ay] : recurse_on) {
    MuEstimate e = estimate_mu(qy, ay, lk);
    if (!e.low_confidence) {
      best = found_any ? std::min(best, e.mu) : e.mu;
      found_any = true;
    }
  }
  if (found_any) return {best, false};
  return {1.0, true};
}

double Catalogue::fallback_list_size(const QueryGraph& p, const Descriptor& d,
                                     const std::string& lk) const {
  const std::string& ls = p.vertices()[d.idx].label;
  uint64_t vc = vertex_count(ls);
  if (vc == 0) return 0.0;
  uint64_t edges = d.dir == Dir::Forward ? base_count(d.edge_label, ls, lk)
                                         : base_count(d.edge_label, lk, ls);
  return static_cast<double>(edges) / static_cast<double>(vc);
}

ExtensionEstimate Catalogue::estimate_extension(const QueryGraph& qk_minus_1,
                                                const std::vector<Descriptor>& a,
                                                const std::string& lk) const {
  ExtensionEstimate out;
  LookupResult r = lookup(qk_minus_1, a, lk);
  if (r.found) {
    out.mu = r.mu;
    out.list_sizes = r.avg_sizes;
    out.support = r.support;
    return out;
  }
  MuEstimate m = estimate_mu(qk_minus_1, a, lk);
  out.mu = m.mu;
  out.low_confidence = m.low_confidence;
  out.list_sizes.reserve(a.size());
  for (const Descriptor& d : a) out.list_sizes.push_back(fallback_list_size(qk_minus_1, d, lk));
  return out;
}

Catalogue::CardinalityEstimate Catalogue::estimate_cardinality(const QueryGraph& q) const {
  if (q.size() == 1) return {static_cast<double>(vertex_count(q.vertices()[0].label)), false};

  // initial edge: highest base count, ties by smallest canonical key
  const QueryEdge* first = nullptr;
  uint64_t first_count = 0;
  std::string first_key;
  for (const auto& e : q.edges()) {
    uint64_t bc = base_count(e.label, q.vertices()[e.src].label, q.vertices()[e.dst].label);
    QueryGraph ep = e.src == e.dst
                        ? QueryGraph({q.vertices()[e.src]}, {{0, 0, e.label}})
                        : QueryGraph({q.vertices()[e.src], q.vertices()[e.dst]}, {{0, 1, e.label}});
    std::string key = ep.canonicalize().hex();
    if (!first || bc > first_count || (bc == first_count && key < first_key)) {
      first = &e;
      first_count = bc;
      first_key = key;
    }
  }

  double card = static_cast<double>(first_count);
  bool low_conf = false;
  std::vector<uint32_t> matched{first->src, first->dst};
  if (first->src == first->dst) matched.pop_back();

  while (matched.size() < q.size() && card > 0.0) {
    std::vector<bool> in(q.size(), false);
    for (uint32_t v : matched) in[v] = true;

    uint32_t best_v = UINT32_MAX;
    uint64_t best_support = 0;
    std::string best_key;
    std::vector<Descriptor> best_a;
    QueryGraph prefix = q.project_ordered(matched);
    // canonical tie-break keys are affordable only while the extension can
    // still be a catalogue entry; beyond h the ascending vertex scan decides
    const bool in_range = matched.size() <= h_;
    for (uint32_t v = 0; v < q.size(); ++v) {
      if (in[v]) continue;
      std::vector<Descriptor> a;
      for (const auto& e : q.edges()) {
        if (e.src == v && in[e.dst]) {
          uint32_t pos = static_cast<uint32_t>(
              std::find(matched.begin(), matched.end(), e.dst) - matched.begin());
          a.push_back({pos, Dir::Backward, e.label});
        } else if (e.dst == v && in[e.src]) {
          uint32_t pos = static_cast<uint32_t>(
              std::find(matched.begin(), matched.end(), e.src) - matched.begin());
          a.push_back({pos, Dir::Forward, e.label});
        }
      }
      if (a.empty()) continue;
      std::sort(a.begin(), a.end());
      std::string key;
      uint64_t support = 0;
      if (in_range) {
        QueryGraph ep = extension_pattern(prefix, a, q.vertices()[v].label);
        key = ep.canonicalize(static_cast<uint32_t>(matched.size())).hex();
        LookupResult r = lookup(prefix, a, q.vertices()[v].label);
        support = r.found ? r.support : 0;
      }
      if (best_v == UINT32_MAX || support > best_support ||
          (support == best_support && key < best_key)) {
        best_v = v;
        best_support = support;
        best_key = key;
        best_a = std::move(a);
      }
    }
    if (best_v == UINT32_MAX) break;  // disconnected query; caller violated pre

    MuEstimate m = estimate_mu(prefix, best_a, q.vertices()[best_v].label);
    card *= m.mu;
    low_conf |= m.low_confidence;
    matched.push_back(best_v);
  }
  return {card, low_conf};
}

void Catalogue::save(std::ostream& out) const {
  out << "catalogue v1 h=" << h_ << " z=" << z_ << " seed=" << seed_ << "\n";
  for (const auto& [label, n] : vertex_counts_) out << "vcount " << label << " " << n << "\n";
  for (const auto& [key, n] : base_counts_) {
    const auto& [el, sl, dl] = key;
    out << "base " << el << " " << sl << " " << dl << " " << n << "\n";
  }
  for (const auto& [key, e] : entries_) {
    out << "entry " << key << " " << format_double(e.mu) << " " << e.sample_support << " "
        << e.avg_sizes.size();
    for (const auto& [dk, size] : e.avg_sizes) {
      const auto& [pos, dir, el] = dk;
      out << " " << pos << " " << (dir == 0 ? 'f' : 'b') << " " << el << " "
          << format_double(size);
    }
    out << "\n";
  }
}

void Catalogue::save_file(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  save(f);
}

Catalogue Catalogue::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty catalogue file");
  {
    std::istringstream hs(line);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "catalogue") throw ValidationError("not a catalogue file");
    if (version != "v1") throw ValidationError("unsupported catalogue version '" + version + "'");
    Catalogue c;
    std::string kv;
    while (hs >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ValidationError("malformed catalogue header");
      std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
      if (k == "h")
        c.h_ = std::stoull(v);
      else if (k == "z")
        c.z_ = std::stoull(v);
      else if (k == "seed")
        c.seed_ = std::stoull(v);
      else
        throw ValidationError("unknown catalogue header field '" + k + "'");
    }

    size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag == "vcount") {
        std::string label;
        uint64_t n;
        if (!(ls >> label >> n)) throw ParseError("malformed vcount line", line_no);
        c.vertex_counts_[label] = n;
      } else if (tag == "base") {
        std::string el, sl, dl;
        uint64_t n;
        if (!(ls >> el >> sl >> dl >> n)) throw ParseError("malformed base line", line_no);
        c.base_counts_[{el, sl, dl}] = n;
      } else if (tag == "entry") {
        std::string key;
        CatalogueEntry e;
        size_t ndesc;
        if (!(ls >> key >> e.mu >> e.sample_support >> ndesc))
          throw ParseError("malformed entry line", line_no);
        for (size_t i = 0; i < ndesc; ++i) {
          uint32_t pos;
          char dir;
          std::string el;
          double size;
          if (!(ls >> pos >> dir >> el >> size)) throw ParseError("malformed entry line", line_no);
          e.avg_sizes[{pos, static_cast<uint8_t>(dir == 'f' ? 0 : 1), el}] = size;
        }
        c.entries_[key] = std::move(e);
      } else {
        throw ParseError("unknown catalogue line tag '" + tag + "'", line_no);
      }
    }
    return c;
  }
}

Catalogue Catalogue::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return load(f);
}

}  // namespace sgq
