#include "sgq/executor.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "sgq/intersect.hpp"

namespace sgq {

void ExecStats::merge(const ExecStats& o) {
  icost_actual += o.icost_actual;
  cache_hits += o.cache_hits;
  cache_misses += o.cache_misses;
  output_count += o.output_count;
  if (per_operator_matches.size() < o.per_operator_matches.size())
    per_operator_matches.resize(o.per_operator_matches.size(), 0);
  for (size_t i = 0; i < o.per_operator_matches.size(); ++i)
    per_operator_matches[i] += o.per_operator_matches[i];
}

StepReestimate reestimate_step(double card_in, const std::vector<double>& avg_sizes,
                               const std::vector<double>& actual_sizes, double mu) {
  StepReestimate r;
  r.mu = mu;
  double total = 0.0;
  for (size_t i = 0; i < avg_sizes.size(); ++i) {
    double size = avg_sizes[i];
    if (actual_sizes[i] >= 0.0) {
      size = actual_sizes[i];
      if (avg_sizes[i] > 0.0) r.mu *= actual_sizes[i] / avg_sizes[i];
    }
    total += size;
  }
  r.icost = card_in * total;
  return r;
}

namespace {

using Tuple = std::vector<VertexId>;

struct VecHash {
  size_t operator()(const Tuple& v) const {
    uint64_t h = 1469598103934665603ull;
    for (VertexId x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

bool has_data_edge(const Graph& g, VertexId a, VertexId b, LabelId el) {
  NeighborList nl = g.neighbors(a, Dir::Forward, el, g.vertex_label(b));
  return std::binary_search(nl.begin(), nl.end(), b);
}

// ---- static per-node execution metadata, built once per run --------------

struct ScanMeta {
  bool possible = false;
  LabelId el = 0, sl = 0, dl = 0;
  struct Extra {
    uint32_t a_pos, b_pos;  // data edge tuple[a_pos] -> tuple[b_pos]
    LabelId el;
  };
  std::vector<Extra> extras;  // further query edges between the two vertices
};

struct ExtendMeta {
  bool possible = false;
  LabelId tlabel = 0;
  std::vector<LabelId> elabels;  // aligned with the node's descriptors
};

struct JoinMeta {
  std::vector<size_t> build_key_pos;      // join vertices in build out_order
  std::vector<size_t> probe_key_pos;      // join vertices in probe out_order
  std::vector<size_t> probe_private_pos;  // probe-only vertices, probe order
};

struct RegionStep {
  bool possible = false;
  uint32_t target = 0;
  LabelId tlabel = 0;
  std::vector<Descriptor> descs;  // idx into the evolving region tuple
  std::vector<LabelId> elabels;
  std::vector<double> avg_sizes;
  double mu = 0.0;
};

struct RegionMeta {
  const PlanNode* base = nullptr;
  size_t base_size = 0;
  std::vector<size_t> chain_ids;  // chain node ids, first extension first
  std::vector<std::vector<RegionStep>> orders;
};

struct NodeMeta {
  size_t id = 0;
  ScanMeta scan;
  ExtendMeta ext;
  JoinMeta join;
  RegionMeta* region = nullptr;
};

struct Exec {
  const QueryGraph& q;
  const Graph& g;
  ExecOptions opts;
  const Catalogue* cat;
  size_t op_count = 0;
  std::unordered_map<const PlanNode*, NodeMeta> meta;
  std::vector<std::unique_ptr<RegionMeta>> regions;

  Exec(const QueryGraph& q_, const Graph& g_, const ExecOptions& o, const Catalogue* c)
      : q(q_), g(g_), opts(o), cat(c) {}

  void setup(const PlanNode& n) {
    NodeMeta& m = meta[&n];
    m.id = op_count++;
    switch (n.kind) {
      case OpKind::Scan: {
        const QueryEdge& e = q.edges()[n.scan_edge];
        auto el = g.find_edge_label(e.label);
        auto sl = g.find_vertex_label(q.vertices()[e.src].label);
        auto dl = g.find_vertex_label(q.vertices()[e.dst].label);
        if (!el || !sl || !dl) return;
        m.scan = {true, *el, *sl, *dl, {}};
        for (uint32_t i = 0; i < q.edges().size(); ++i) {
          if (i == n.scan_edge) continue;
          const QueryEdge& o = q.edges()[i];
          bool fwd = o.src == e.src && o.dst == e.dst;
          bool bwd = o.src == e.dst && o.dst == e.src;
          if (!fwd && !bwd) continue;
          auto oel = g.find_edge_label(o.label);
          if (!oel) {
            m.scan.possible = false;  // an induced edge no data edge can match
            return;
          }
          m.scan.extras.push_back({fwd ? 0u : 1u, fwd ? 1u : 0u, *oel});
        }
        break;
      }
      case OpKind::Extend: {
        auto tl = g.find_vertex_label(q.vertices()[n.target].label);
        m.ext.possible = tl.has_value();
        if (tl) m.ext.tlabel = *tl;
        for (const auto& d : n.descriptors) {
          auto el = g.find_edge_label(d.edge_label);
          if (!el) m.ext.possible = false;
          m.ext.elabels.push_back(el.value_or(0));
        }
        if (!n.adaptive_orders.empty()) {
          if (!cat)
            throw ValidationError("adaptive plans need a catalogue for routing estimates");
          regions.push_back(std::make_unique<RegionMeta>());
          m.region = regions.back().get();
          build_region(n, *m.region);
        }
        setup(*n.child);
        if (m.region) {
          // chain node ids, bottom (first extension) first
          const PlanNode* p = &n;
          std::vector<size_t> ids;
          for (size_t i = 0; i < n.adaptive_orders[0].size(); ++i) {
            ids.push_back(meta.at(p).id);
            p = p->child.get();
          }
          std::reverse(ids.begin(), ids.end());
          m.region->chain_ids = std::move(ids);
        }
        break;
      }
      case OpKind::HashJoin: {
        std::unordered_map<uint32_t, size_t> bpos, ppos;
        for (size_t i = 0; i < n.build->out_order.size(); ++i) bpos[n.build->out_order[i]] = i;
        for (size_t i = 0; i < n.probe->out_order.size(); ++i) ppos[n.probe->out_order[i]] = i;
        for (uint32_t v : n.join_vertices) {
          m.join.build_key_pos.push_back(bpos.at(v));
          m.join.probe_key_pos.push_back(ppos.at(v));
        }
        for (uint32_t v : n.probe->out_order)
          if (!bpos.count(v)) m.join.probe_private_pos.push_back(ppos.at(v));
        setup(*n.build);
        setup(*n.probe);
        break;
      }
    }
  }

  void build_region(const PlanNode& top, RegionMeta& r) {
    const PlanNode* base = &top;
    for (size_t i = 0; i < top.adaptive_orders[0].size(); ++i) base = base->child.get();
    r.base = base;
    r.base_size = base->out_order.size();
    for (const auto& targets : top.adaptive_orders) {
      std::vector<RegionStep> steps;
      std::vector<uint32_t> evolving = base->out_order;
      for (uint32_t t : targets) {
        RegionStep s;
        s.target = t;
        for (uint32_t pos = 0; pos < evolving.size(); ++pos) {
          uint32_t v = evolving[pos];
          for (const auto& e : q.edges()) {
            if (e.src == v && e.dst == t) s.descs.push_back({pos, Dir::Forward, e.label});
            if (e.src == t && e.dst == v) s.descs.push_back({pos, Dir::Backward, e.label});
          }
        }
        auto tl = g.find_vertex_label(q.vertices()[t].label);
        s.possible = tl.has_value();
        if (tl) s.tlabel = *tl;
        for (const auto& d : s.descs) {
          auto el = g.find_edge_label(d.edge_label);
          if (!el) s.possible = false;
          s.elabels.push_back(el.value_or(0));
        }
        ExtensionEstimate est = cat->estimate_extension(q.project_ordered(evolving), s.descs,
                                                        q.vertices()[t].label);
        s.avg_sizes = est.list_sizes;
        s.mu = est.mu;
        evolving.push_back(t);
        steps.push_back(std::move(s));
      }
      r.orders.push_back(std::move(steps));
    }
  }
};

// ---- shared state for the parallel mode ----------------------------------

constexpr VertexId kScanChunk = 1024;

struct SharedJoin {
  size_t parts = 1;
  std::vector<std::unordered_map<Tuple, std::vector<Tuple>, VecHash>> tables;
  std::vector<std::mutex> locks;
  std::unique_ptr<std::barrier<>> built;
  std::atomic<size_t> replay_next{0};
};

struct Shared {
  std::unordered_map<const PlanNode*, std::unique_ptr<std::atomic<VertexId>>> scan_cursors;
  std::unordered_map<const PlanNode*, std::unique_ptr<SharedJoin>> joins;

  void prepare(const PlanNode& n, size_t workers) {
    switch (n.kind) {
      case OpKind::Scan:
        scan_cursors[&n] = std::make_unique<std::atomic<VertexId>>(0);
        break;
      case OpKind::Extend:
        prepare(*n.child, workers);
        break;
      case OpKind::HashJoin: {
        auto j = std::make_unique<SharedJoin>();
        j->parts = 64 * workers;
        j->tables.resize(j->parts);
        j->locks = std::vector<std::mutex>(j->parts);
        j->built = std::make_unique<std::barrier<>>(static_cast<ptrdiff_t>(workers));
        joins[&n] = std::move(j);
        prepare(*n.build, workers);
        prepare(*n.probe, workers);
        break;
      }
    }
  }
};

// ---- per-worker runtime ---------------------------------------------------

struct CacheState {
  bool valid = false;
  Tuple key;
  Tuple set;
};

struct Worker {
  ExecStats stats;
  std::unordered_map<const PlanNode*, CacheState> caches;
  std::map<std::tuple<const PlanNode*, size_t, size_t>, CacheState> region_caches;
  std::vector<Tuple> buf_pool;
};

using Emit = std::function<void(Tuple&)>;

class Runner {
 public:
  Runner(Exec& x, Worker& w, Shared* sh) : x_(x), w_(w), sh_(sh) {}

  void run(const PlanNode& n, const Emit& emit) {
    const NodeMeta& m = x_.meta.at(&n);
    if (m.region) {
      run_region(n, m, emit);
      return;
    }
    switch (n.kind) {
      case OpKind::Scan:
        run_scan(n, m, emit);
        break;
      case OpKind::Extend:
        run_extend(n, m, emit);
        break;
      case OpKind::HashJoin:
        run_join(n, m, emit);
        break;
    }
  }

 private:
  bool injective() const { return x_.opts.semantics == Semantics::Injective; }

  void count(const NodeMeta& m) { ++w_.stats.per_operator_matches[m.id]; }
  void count_id(size_t id) { ++w_.stats.per_operator_matches[id]; }

  void run_scan(const PlanNode& n, const NodeMeta& m, const Emit& emit) {
    if (!m.scan.possible) return;
    const VertexId nv = static_cast<VertexId>(x_.g.vertex_count());
    Tuple t(2);
    auto scan_range = [&](VertexId lo, VertexId hi) {
      for (VertexId u = lo; u < hi; ++u) {
        if (x_.g.vertex_label(u) != m.scan.sl) continue;
        for (VertexId v : x_.g.neighbors(u, Dir::Forward, m.scan.el, m.scan.dl)) {
          if (injective() && u == v) continue;
          t[0] = u;
          t[1] = v;
          bool ok = true;
          for (const auto& ex : m.scan.extras)
            if (!has_data_edge(x_.g, t[ex.a_pos], t[ex.b_pos], ex.el)) {
              ok = false;
              break;
            }
          if (!ok) continue;
          count(m);
          emit(t);
        }
      }
    };
    if (sh_) {
      std::atomic<VertexId>& cur = *sh_->scan_cursors.at(&n);
      while (true) {
        VertexId lo = cur.fetch_add(kScanChunk);
        if (lo >= nv) break;
        scan_range(lo, std::min<VertexId>(lo + kScanChunk, nv));
      }
    } else {
      scan_range(0, nv);
    }
  }

  // intersection with Eq.-style accounting: lists are accessed in descriptor
  // order, each accessed list charges its full size, and the remaining lists
  // are skipped once the running intersection is empty
  void extension_set(const Tuple& t, const std::vector<Descriptor>& descs,
                     const std::vector<LabelId>& elabels, LabelId tlabel, CacheState& cs,
                     Tuple& out) {
    Tuple key(descs.size());
    for (size_t i = 0; i < descs.size(); ++i) key[i] = t[descs[i].idx];
    if (x_.opts.use_cache && cs.valid && cs.key == key) {
      ++w_.stats.cache_hits;
      out = cs.set;
      return;
    }
    out.clear();
    for (size_t i = 0; i < descs.size(); ++i) {
      if (i > 0 && out.empty()) break;
      NeighborList nl = x_.g.neighbors(t[descs[i].idx], descs[i].dir, elabels[i], tlabel);
      w_.stats.icost_actual += static_cast<double>(nl.len);
      if (i == 0) {
        out.assign(nl.begin(), nl.end());
      } else {
        intersect_pair(out.data(), out.size(), nl.ids, nl.len, scratch_);
        std::swap(out, scratch_);
      }
    }
    if (x_.opts.use_cache) {
      ++w_.stats.cache_misses;
      cs.valid = true;
      cs.key = std::move(key);
      cs.set = out;
    }
  }

  void run_extend(const PlanNode& n, const NodeMeta& m, const Emit& emit) {
    if (!m.ext.possible) return;
    CacheState& cs = w_.caches[&n];
    Tuple set;
    run(*n.child, [&](Tuple& t) {
      extension_set(t, n.descriptors, m.ext.elabels, m.ext.tlabel, cs, set);
      for (VertexId v : set) {
        if (injective() && std::find(t.begin(), t.end(), v) != t.end()) continue;
        t.push_back(v);
        count(m);
        emit(t);
        t.pop_back();
      }
    });
  }

  void run_join(const PlanNode& n, const NodeMeta& m, const Emit& emit) {
    auto key_of = [](const Tuple& t, const std::vector<size_t>& pos) {
      Tuple k(pos.size());
      for (size_t i = 0; i < pos.size(); ++i) k[i] = t[pos[i]];
      return k;
    };
    auto handle_probe = [&](const Tuple& pt, auto&& lookup) {
      const std::vector<Tuple>* bucket = lookup(key_of(pt, m.join.probe_key_pos));
      if (!bucket) return;
      for (const Tuple& bt : *bucket) {
        Tuple merged = bt;
        bool ok = true;
        for (size_t pos : m.join.probe_private_pos) {
          VertexId v = pt[pos];
          if (injective() && std::find(merged.begin(), merged.end(), v) != merged.end()) {
            ok = false;
            break;
          }
          merged.push_back(v);
        }
        if (!ok) continue;
        count(m);
        emit(merged);
      }
    };
    auto replay_tuple = [&](const Tuple& bt) {
      Tuple pt(n.reuse_columns.size());
      for (size_t j = 0; j < n.reuse_columns.size(); ++j) pt[j] = bt[n.reuse_columns[j]];
      return pt;
    };

    if (sh_) {
      SharedJoin& sj = *sh_->joins.at(&n);
      run(*n.build, [&](Tuple& t) {
        Tuple k = key_of(t, m.join.build_key_pos);
        size_t p = VecHash{}(k) % sj.parts;
        std::lock_guard<std::mutex> lock(sj.locks[p]);
        sj.tables[p][std::move(k)].push_back(t);
      });
      sj.built->arrive_and_wait();
      auto lookup = [&](const Tuple& k) -> const std::vector<Tuple>* {
        const auto& table = sj.tables[VecHash{}(k) % sj.parts];
        auto it = table.find(k);
        return it == table.end() ? nullptr : &it->second;
      };
      if (n.symmetric_reuse) {
        while (true) {
          size_t p = sj.replay_next.fetch_add(1);
          if (p >= sj.parts) break;
          for (const auto& [k, bucket] : sj.tables[p])
            for (const Tuple& bt : bucket) handle_probe(replay_tuple(bt), lookup);
        }
      } else {
        run(*n.probe, [&](Tuple& t) { handle_probe(t, lookup); });
      }
    } else {
      std::unordered_map<Tuple, std::vector<Tuple>, VecHash> table;
      run(*n.build,
          [&](Tuple& t) { table[key_of(t, m.join.build_key_pos)].push_back(t); });
      auto lookup = [&](const Tuple& k) -> const std::vector<Tuple>* {
        auto it = table.find(k);
        return it == table.end() ? nullptr : &it->second;
      };
      if (n.symmetric_reuse) {
        for (const auto& [k, bucket] : table)
          for (const Tuple& bt : bucket) handle_probe(replay_tuple(bt), lookup);
      } else {
        run(*n.probe, [&](Tuple& t) { handle_probe(t, lookup); });
      }
    }
  }

  // ---- adaptive region ----------------------------------------------------

  size_t route(const RegionMeta& r, const Tuple& t) {
    size_t best = 0;
    double best_cost = 0.0;
    for (size_t j = 0; j < r.orders.size(); ++j) {
      double cost = 0.0, card = 1.0;
      for (const RegionStep& s : r.orders[j]) {
        if (!s.possible || card <= 0.0) {
          card = 0.0;
          break;
        }
        std::vector<double> actual(s.descs.size(), -1.0);
        for (size_t i = 0; i < s.descs.size(); ++i)
          if (s.descs[i].idx < r.base_size)
            actual[i] = static_cast<double>(
                x_.g.neighbors(t[s.descs[i].idx], s.descs[i].dir, s.elabels[i], s.tlabel).len);
        StepReestimate re = reestimate_step(card, s.avg_sizes, actual, s.mu);
        cost += re.icost;
        card *= re.mu;
      }
      if (j == 0 || cost < best_cost - 1e-9 * std::max(1.0, best_cost)) {
        best = j;
        best_cost = cost;
      }
    }
    return best;
  }

  void extend_region(const PlanNode& top, const RegionMeta& r, size_t order, size_t depth,
                     Tuple& t, const Emit& emit) {
    if (depth == r.orders[order].size()) {
      emit(t);
      return;
    }
    const RegionStep& s = r.orders[order][depth];
    if (!s.possible) return;
    CacheState& cs = w_.region_caches[{&top, order, depth}];
    Tuple set;
    extension_set(t, s.descs, s.elabels, s.tlabel, cs, set);
    for (VertexId v : set) {
      if (injective() && std::find(t.begin(), t.end(), v) != t.end()) continue;
      t.push_back(v);
      count_id(r.chain_ids[depth]);
      extend_region(top, r, order, depth + 1, t, emit);
      t.pop_back();
    }
  }

  void run_region(const PlanNode& n, const NodeMeta& m, const Emit& emit) {
    const RegionMeta& r = *m.region;
    run(*r.base, [&](Tuple& t) {
      size_t j = route(r, t);
      extend_region(n, r, j, 0, t, emit);
    });
  }

  Exec& x_;
  Worker& w_;
  Shared* sh_;
  Tuple scratch_;
};

void enumerate_orders(const QueryGraph& q, const std::vector<uint32_t>& base,
                      std::vector<uint32_t>& remaining, std::vector<uint32_t>& current,
                      std::vector<bool>& in_set, std::vector<std::vector<uint32_t>>& out) {
  if (remaining.empty()) {
    out.push_back(current);
    return;
  }
  for (size_t i = 0; i < remaining.size(); ++i) {
    uint32_t v = remaining[i];
    bool adjacent = false;
    for (const auto& e : q.edges()) {
      if ((e.src == v && in_set[e.dst]) || (e.dst == v && in_set[e.src])) {
        adjacent = true;
        break;
      }
    }
    if (!adjacent) continue;
    std::swap(remaining[i], remaining.back());
    remaining.pop_back();
    current.push_back(v);
    in_set[v] = true;
    enumerate_orders(q, base, remaining, current, in_set, out);
    in_set[v] = false;
    current.pop_back();
    remaining.push_back(v);
    std::swap(remaining[i], remaining.back());
  }
}

void annotate_adaptive(PlanNode* n, const QueryGraph& q) {
  if (!n) return;
  if (n->kind == OpKind::Extend) {
    // measure the maximal Extend chain below (and including) this node
    std::vector<PlanNode*> chain;
    PlanNode* p = n;
    while (p->kind == OpKind::Extend) {
      chain.push_back(p);
      p = p->child.get();
    }
    if (chain.size() >= 2) {
      PlanNode* base = p;
      std::vector<uint32_t> targets;
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) targets.push_back((*it)->target);
      std::vector<bool> in_set(q.size(), false);
      for (uint32_t v : base->out_order) in_set[v] = true;
      std::vector<uint32_t> current;
      std::vector<std::vector<uint32_t>> orders;
      enumerate_orders(q, base->out_order, targets, current, in_set, orders);
      std::sort(orders.begin(), orders.end());
      n->adaptive_orders = std::move(orders);
      annotate_adaptive(base->build.get(), q);
      annotate_adaptive(base->probe.get(), q);
      return;
    }
    annotate_adaptive(n->child.get(), q);
    return;
  }
  annotate_adaptive(n->build.get(), q);
  annotate_adaptive(n->probe.get(), q);
}

}  // namespace

Plan make_adaptive(const Plan& p, const QueryGraph& q) {
  Plan out = p.clone();
  annotate_adaptive(out.root.get(), q);
  return out;
}

ExecStats execute(const Plan& p, const QueryGraph& q, const Graph& g, const ExecOptions& opts,
                  const Catalogue* cat, const MatchSink& sink) {
  if (!p.root) throw ValidationError("empty plan");
  Exec x(q, g, opts, cat);
  x.setup(*p.root);
  Worker w;
  w.stats.per_operator_matches.assign(x.op_count, 0);
  Runner r(x, w, nullptr);
  r.run(*p.root, [&](Tuple& t) {
    ++w.stats.output_count;
    if (sink) sink(t);
  });
  return std::move(w.stats);
}

ExecStats execute_parallel(const Plan& p, const QueryGraph& q, const Graph& g, size_t workers,
                           const ExecOptions& opts, const Catalogue* cat) {
  if (!p.root) throw ValidationError("empty plan");
  if (workers < 1) throw ValidationError("worker count must be at least 1");
  Exec x(q, g, opts, cat);
  x.setup(*p.root);
  Shared sh;
  sh.prepare(*p.root, workers);

  std::vector<Worker> ws(workers);
  for (auto& w : ws) w.stats.per_operator_matches.assign(x.op_count, 0);
  auto body = [&](size_t wi) {
    Runner r(x, ws[wi], &sh);
    r.run(*p.root, [&](Tuple&) { ++ws[wi].stats.output_count; });
  };
  std::vector<std::thread> threads;
  for (size_t wi = 1; wi < workers; ++wi) threads.emplace_back(body, wi);
  body(0);
  for (auto& t : threads) t.join();

  ExecStats total;
  total.per_operator_matches.assign(x.op_count, 0);
  for (auto& w : ws) total.merge(w.stats);
  return total;
}

}  // namespace sgq
