#include "sgq/planner.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <string>

namespace sgq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ctx {
  const QueryGraph& q;
  const Catalogue& cat;
  const CostWeights& w;
  std::vector<uint64_t> adj;         // per-vertex neighborhood masks
  std::vector<uint64_t> edge_masks;  // per-edge endpoint masks
  uint64_t full = 0;

  Ctx(const QueryGraph& q_, const Catalogue& cat_, const CostWeights& w_)
      : q(q_), cat(cat_), w(w_) {
    if (q.size() > 64) throw ValidationError("queries over 64 vertices are not supported");
    adj.assign(q.size(), 0);
    for (const auto& e : q.edges()) {
      if (e.src == e.dst)
        throw ValidationError("self-loop query edges are not supported by the planner");
      adj[e.src] |= uint64_t{1} << e.dst;
      adj[e.dst] |= uint64_t{1} << e.src;
      edge_masks.push_back((uint64_t{1} << e.src) | (uint64_t{1} << e.dst));
    }
    full = q.size() == 64 ? ~uint64_t{0} : (uint64_t{1} << q.size()) - 1;
  }

  bool connected(uint64_t mask) const {
    if (!mask) return false;
    uint64_t seen = mask & (~mask + 1);
    while (true) {
      uint64_t grow = seen;
      for (uint64_t m = seen; m;) {
        int v = std::countr_zero(m);
        m &= m - 1;
        grow |= adj[v] & mask;
      }
      if (grow == seen) break;
      seen = grow;
    }
    return seen == mask;
  }

  // every query edge inside `all` must be induced in one of the children
  bool covers(uint64_t all, uint64_t s1, uint64_t s2) const {
    for (uint64_t em : edge_masks) {
      if ((em & all) != em) continue;
      if ((em & s1) != em && (em & s2) != em) return false;
    }
    return true;
  }
};

// a join of a sub-query with a single edge adding one vertex is always
// rewritten as an extension, so such joins are excluded from the plan space.
// children overlapping on more than two vertices are excluded as well: such
// joins recompute most of each other's work and make the space blow up
// combinatorially, and the same rule is applied by both the optimizer and the
// spectrum so the two stay comparable
bool rewrite_pruned(uint64_t s1, uint64_t s2) {
  if (std::popcount(s1 & s2) > 2) return true;
  int k = std::popcount(s1 | s2);
  return (std::popcount(s1) == 2 && std::popcount(s2) == k - 1) ||
         (std::popcount(s2) == 2 && std::popcount(s1) == k - 1);
}

// canonicalization searches permutations, so only small children are checked;
// missing the flag just means the probe side is recomputed instead of replayed
constexpr size_t kReuseCheckLimit = 6;

void mark_symmetric_reuse(PlanNode& n, const QueryGraph& q) {
  if (n.build->out_order.size() != n.probe->out_order.size()) return;
  if (n.build->out_order.size() > kReuseCheckLimit) return;
  QueryGraph pb = q.project_ordered(n.build->out_order);
  QueryGraph pp = q.project_ordered(n.probe->out_order);
  if (pb.edges().size() != pp.edges().size()) return;
  CanonicalKey kb = pb.canonicalize();
  CanonicalKey kp = pp.canonicalize();
  if (kb.encoding != kp.encoding) return;
  std::vector<uint32_t> canon_to_build(n.build->out_order.size());
  for (uint32_t i = 0; i < canon_to_build.size(); ++i) canon_to_build[kb.permutation[i]] = i;
  n.reuse_columns.resize(n.probe->out_order.size());
  for (uint32_t j = 0; j < n.reuse_columns.size(); ++j)
    n.reuse_columns[j] = canon_to_build[kp.permutation[j]];
  n.symmetric_reuse = true;
}

uint64_t mask_of(const std::vector<uint32_t>& vs) {
  uint64_t m = 0;
  for (uint32_t v : vs) m |= uint64_t{1} << v;
  return m;
}

// depth-first enumeration of connected-prefix pipelines; `offer` sees every
// prefix, full plans included
template <typename F>
void wco_rec(Ctx& c, std::unique_ptr<PlanNode> node, uint64_t mask, F& offer) {
  offer(mask, node);
  if (mask == c.full) return;
  for (uint32_t v = 0; v < c.q.size(); ++v) {
    if ((mask >> v) & 1) continue;
    if (!(c.adj[v] & mask)) continue;
    wco_rec(c, make_extend(c.q, node->clone(), v), mask | (uint64_t{1} << v), offer);
  }
}

template <typename F>
void wco_enumerate(Ctx& c, F& offer) {
  for (uint32_t e = 0; e < c.q.edges().size(); ++e)
    wco_rec(c, make_scan(c.q, e), c.edge_masks[e], offer);
}

struct Entry {
  Plan plan;
  double cost = kInf;
  double card = 0.0;
  size_t joins = 0;
  std::string sig;
};

// deterministic preference: cost, then fewer joins, then smallest signature
bool improves(double cost, size_t joins, const std::string& sig, const Entry& e) {
  double eps = 1e-9 * std::max(1.0, std::max(cost, e.cost == kInf ? 0.0 : e.cost));
  if (cost < e.cost - eps) return true;
  if (cost > e.cost + eps) return false;
  if (joins != e.joins) return joins < e.joins;
  return sig < e.sig;
}

class Optimizer {
 public:
  explicit Optimizer(Ctx& c) : c_(c) {}

  void offer(uint64_t mask, Plan&& p) {
    PlanCost pc = plan_cost(p, c_.q, c_.cat, c_.w, true, &cards_);
    size_t joins = p.root->hash_join_count();
    std::string sig = p.signature();
    Entry& e = best_[mask];
    if (improves(pc.total, joins, sig, e)) {
      e.plan = std::move(p);
      e.cost = pc.total;
      e.card = e.plan.est_card;
      e.joins = joins;
      e.sig = std::move(sig);
    }
  }

  void offer_join(uint64_t s1, uint64_t s2) {
    const Entry& a = best_.at(s1);
    const Entry& b = best_.at(s2);
    // build on the side with the smaller estimated cardinality
    const Entry& build = a.card <= b.card ? a : b;
    const Entry& probe = a.card <= b.card ? b : a;
    auto j = make_hash_join(build.plan.root->clone(), probe.plan.root->clone());
    mark_symmetric_reuse(*j, c_.q);
    offer(s1 | s2, Plan(std::move(j)));
  }

  bool has(uint64_t mask) const { return best_.count(mask) && best_.at(mask).cost < kInf; }
  Entry& at(uint64_t mask) { return best_.at(mask); }
  std::map<uint64_t, Entry>& entries() { return best_; }

 private:
  Ctx& c_;
  std::map<uint64_t, Entry> best_;
  CardCache cards_;  // subset cardinalities are plan independent
};

}  // namespace

std::vector<CostedPlan> enumerate_wco_plans(const QueryGraph& q, const Catalogue& cat,
                                            const CostWeights& w) {
  Ctx c(q, cat, w);
  std::vector<CostedPlan> out;
  auto offer = [&](uint64_t mask, const std::unique_ptr<PlanNode>& node) {
    if (mask != c.full) return;
    CostedPlan cp;
    cp.plan = Plan(node->clone());
    cp.cost = plan_cost(cp.plan, q, cat, w, true);
    out.push_back(std::move(cp));
  };
  wco_enumerate(c, offer);
  return out;
}

Plan optimize(const QueryGraph& q, const Catalogue& cat, const CostWeights& w) {
  if (q.size() > kLargeQueryThreshold) return optimize_large(q, cat, w);
  Ctx c(q, cat, w);
  Optimizer opt(c);

  // seed every pipeline prefix of every connected ordering
  auto offer_prefix = [&](uint64_t mask, const std::unique_ptr<PlanNode>& node) {
    opt.offer(mask, Plan(node->clone()));
  };
  wco_enumerate(c, offer_prefix);

  for (size_t k = 3; k <= q.size(); ++k) {
    for (uint64_t mask = 1; mask <= c.full; ++mask) {
      if (std::popcount(mask) != static_cast<int>(k)) continue;
      if ((mask & c.full) != mask || !c.connected(mask)) continue;
      // extend the best smaller plan by one adjacent vertex
      for (uint64_t m = mask; m;) {
        uint32_t v = static_cast<uint32_t>(std::countr_zero(m));
        m &= m - 1;
        uint64_t rest = mask & ~(uint64_t{1} << v);
        if (!opt.has(rest) || !(c.adj[v] & rest)) continue;
        opt.offer(mask, Plan(make_extend(q, opt.at(rest).plan.root->clone(), v)));
      }
      // hash joins of two stored sub-plans
      uint64_t s1 = (mask - 1) & mask;
      for (; s1; s1 = (s1 - 1) & mask) {
        if (s1 == mask || !opt.has(s1)) continue;
        uint64_t rest = mask & ~s1;
        for (uint64_t x = s1;; x = (x - 1) & s1) {
          uint64_t s2 = rest | x;
          if (x != 0 && s2 != mask && opt.has(s2) && !rewrite_pruned(s1, s2) &&
              c.covers(mask, s1, s2))
            opt.offer_join(s1, s2);
          if (x == 0) break;
        }
      }
    }
  }
  if (!opt.has(c.full)) throw ValidationError("no plan found for query");
  Plan result = std::move(opt.at(c.full).plan);
  plan_cost(result, q, cat, w, true);
  return result;
}

Plan optimize_large(const QueryGraph& q, const Catalogue& cat, const CostWeights& w, size_t beam) {
  Ctx c(q, cat, w);
  Optimizer opt(c);
  for (uint32_t e = 0; e < q.edges().size(); ++e)
    opt.offer(c.edge_masks[e], Plan(make_scan(q, e)));

  for (size_t k = 3; k <= q.size(); ++k) {
    // collect candidate moves first; offers mutate the map
    std::vector<std::pair<uint64_t, uint32_t>> extends;  // (source mask, vertex)
    std::vector<std::pair<uint64_t, uint64_t>> joins;
    std::vector<uint64_t> stored;
    for (auto& [mask, e] : opt.entries())
      if (e.cost < kInf) stored.push_back(mask);
    for (uint64_t mask : stored) {
      if (std::popcount(mask) == static_cast<int>(k - 1)) {
        for (uint32_t v = 0; v < q.size(); ++v)
          if (!((mask >> v) & 1) && (c.adj[v] & mask)) extends.push_back({mask, v});
      }
    }
    for (size_t i = 0; i < stored.size(); ++i) {
      for (size_t j = i + 1; j < stored.size(); ++j) {
        uint64_t s1 = stored[i], s2 = stored[j];
        uint64_t u = s1 | s2;
        if (std::popcount(u) != static_cast<int>(k)) continue;
        if (!(s1 & s2) || s1 == u || s2 == u) continue;
        if (rewrite_pruned(s1, s2) || !c.covers(u, s1, s2)) continue;
        joins.push_back({s1, s2});
      }
    }
    for (auto [mask, v] : extends)
      opt.offer(mask | (uint64_t{1} << v), Plan(make_extend(q, opt.at(mask).plan.root->clone(), v)));
    for (auto [s1, s2] : joins) opt.offer_join(s1, s2);

    // beam: keep only the cheapest k-vertex sub-queries
    std::vector<std::pair<double, uint64_t>> level;
    for (auto& [mask, e] : opt.entries())
      if (std::popcount(mask) == static_cast<int>(k) && e.cost < kInf)
        level.push_back({e.cost, mask});
    std::sort(level.begin(), level.end());
    for (size_t i = beam; i < level.size(); ++i) opt.entries().erase(level[i].second);
  }
  if (!opt.has(c.full)) throw ValidationError("no plan found for query");
  Plan result = std::move(opt.at(c.full).plan);
  plan_cost(result, q, cat, w, true);
  return result;
}

namespace {

class SpectrumGen {
 public:
  explicit SpectrumGen(Ctx& c) : c_(c) {}

  const std::vector<Plan>& gen(uint64_t mask) {
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    std::map<std::string, Plan> dedup;
    int k = std::popcount(mask);
    if (k == 2) {
      for (uint32_t e = 0; e < c_.q.edges().size(); ++e)
        if (c_.edge_masks[e] == mask) add(dedup, Plan(make_scan(c_.q, e)));
    } else {
      for (uint64_t m = mask; m;) {
        uint32_t v = static_cast<uint32_t>(std::countr_zero(m));
        m &= m - 1;
        uint64_t rest = mask & ~(uint64_t{1} << v);
        if (!c_.connected(rest) || !(c_.adj[v] & rest)) continue;
        for (const Plan& sub : gen(rest))
          add(dedup, Plan(make_extend(c_.q, sub.root->clone(), v)));
      }
      for (uint64_t s1 = (mask - 1) & mask; s1; s1 = (s1 - 1) & mask) {
        if (!c_.connected(s1)) continue;
        uint64_t rest = mask & ~s1;
        for (uint64_t x = s1;; x = (x - 1) & s1) {
          uint64_t s2 = rest | x;
          if (x != 0 && s2 != mask && s1 != mask && c_.connected(s2) &&
              !rewrite_pruned(s1, s2) && c_.covers(mask, s1, s2)) {
            for (const Plan& b : gen(s1)) {
              for (const Plan& p : gen(s2)) {
                auto j = make_hash_join(b.root->clone(), p.root->clone());
                mark_symmetric_reuse(*j, c_.q);
                add(dedup, Plan(std::move(j)));
              }
            }
          }
          if (x == 0) break;
        }
      }
    }
    std::vector<Plan> out;
    out.reserve(dedup.size());
    for (auto& [sig, p] : dedup) out.push_back(std::move(p));
    return memo_.emplace(mask, std::move(out)).first->second;
  }

 private:
  static void add(std::map<std::string, Plan>& dedup, Plan&& p) {
    std::string sig = p.signature();
    dedup.emplace(std::move(sig), std::move(p));
  }
  Ctx& c_;
  std::map<uint64_t, std::vector<Plan>> memo_;
};

}  // namespace

std::vector<CostedPlan> enumerate_spectrum(const QueryGraph& q, const Catalogue& cat,
                                           const CostWeights& w, bool force, size_t guard) {
  if (q.size() > guard && !force)
    throw GuardError("query has " + std::to_string(q.size()) +
                     " vertices; exhaustive enumeration refused without force");
  Ctx c(q, cat, w);
  SpectrumGen gen(c);
  std::vector<CostedPlan> out;
  CardCache cards;
  for (const Plan& p : gen.gen(c.full)) {
    CostedPlan cp;
    cp.plan = Plan(p.root->clone());
    cp.cost = plan_cost(cp.plan, q, cat, w, true, &cards);
    out.push_back(std::move(cp));
  }
  std::stable_sort(out.begin(), out.end(), [](const CostedPlan& a, const CostedPlan& b) {
    if (a.cost.total != b.cost.total) return a.cost.total < b.cost.total;
    return a.plan.signature() < b.plan.signature();
  });
  return out;
}

}  // namespace sgq
