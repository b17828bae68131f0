#pragma once

#include <functional>
#include <vector>

#include "sgq/catalogue.hpp"
#include "sgq/cost_model.hpp"
#include "sgq/graph.hpp"
#include "sgq/plan.hpp"

namespace sgq {

struct ExecOptions {
  bool use_cache = true;  // per-operator last-extension-set cache
  Semantics semantics = Semantics::Homomorphic;
};

struct ExecStats {
  // accumulated size of every adjacency list accessed by an intersection;
  // lists served from the cache charge nothing, scans charge nothing
  double icost_actual = 0.0;
  uint64_t cache_hits = 0;
  uint64_t cache_misses = 0;
  uint64_t output_count = 0;
  // tuples emitted per operator, pre-order over the plan tree (same indexing
  // as PlanCost::per_operator)
  std::vector<uint64_t> per_operator_matches;

  void merge(const ExecStats& o);
};

// Called once per complete match; ids are data vertices aligned with the
// root's out_order.
using MatchSink = std::function<void(const std::vector<VertexId>&)>;

// Runs the plan over g. `cat` is required only when the plan carries adaptive
// regions (see make_adaptive); `sink` is optional, counting happens always.
ExecStats execute(const Plan& p, const QueryGraph& q, const Graph& g, const ExecOptions& opts = {},
                  const Catalogue* cat = nullptr, const MatchSink& sink = nullptr);

// Same result count as execute; scans draw ranges from a shared queue and
// hash tables are built cooperatively in partitions. Count mode only.
ExecStats execute_parallel(const Plan& p, const QueryGraph& q, const Graph& g, size_t workers,
                           const ExecOptions& opts = {}, const Catalogue* cat = nullptr);

// Replaces every maximal chain of two or more Extend operators with an
// adaptive region: the top chain node is annotated with all connected orders
// of the chain's target vertices, and at run time each base tuple is routed
// to the order whose re-estimated cost is lowest. Plans without such chains
// are returned unchanged (modulo cloning).
Plan make_adaptive(const Plan& p, const QueryGraph& q);

// One adaptive re-estimation step. avg_sizes are the catalogue's averages;
// actual_sizes holds the observed list length where the source vertex is
// already bound and a negative value where it is not. The i-cost charges
// card_in tuples against the substituted sizes; mu is rescaled by
// (actual / avg) for every substituted list.
struct StepReestimate {
  double icost = 0.0;
  double mu = 0.0;
};
StepReestimate reestimate_step(double card_in, const std::vector<double>& avg_sizes,
                               const std::vector<double>& actual_sizes, double mu);

}  // namespace sgq
