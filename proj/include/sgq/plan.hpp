#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sgq/catalogue.hpp"
#include "sgq/query.hpp"

namespace sgq {

enum class OpKind { Scan, Extend, HashJoin };

// One operator in a rooted plan tree. Every node covers a vertex subset of the
// query; out_order lists those query vertex indices in matched-tuple order.
struct PlanNode {
  OpKind kind = OpKind::Scan;
  std::vector<uint32_t> out_order;

  // Scan: index into the query's edge list
  uint32_t scan_edge = 0;

  // Extend: intersect the lists described by `descriptors` (idx = position in
  // child->out_order) and bind the result to query vertex `target`
  std::unique_ptr<PlanNode> child;
  std::vector<Descriptor> descriptors;
  uint32_t target = 0;

  // HashJoin: build a table on `build` keyed by join_vertices, probe with
  // `probe`. symmetric_reuse marks an isomorphic probe side whose matches can
  // be derived from the build side instead of recomputed.
  std::unique_ptr<PlanNode> build;
  std::unique_ptr<PlanNode> probe;
  std::vector<uint32_t> join_vertices;  // query vertex ids, sorted
  bool symmetric_reuse = false;
  // with symmetric_reuse: probe tuples are build tuples re-read column-wise,
  // reuse_columns[j] = build column feeding probe out_order position j
  std::vector<uint32_t> reuse_columns;

  // set on the top node of an Extend chain replaced by an adaptive region:
  // each entry is one candidate order of the chain's target vertices; the
  // executor routes every base tuple to the order with the lowest re-estimated
  // cost. Empty on fixed plans.
  std::vector<std::vector<uint32_t>> adaptive_orders;

  // filled in by costing
  double est_card = 0.0;
  double est_cost = 0.0;  // this operator only

  std::unique_ptr<PlanNode> clone() const;
  // true when the subtree is a Scan followed only by Extend operators, i.e.
  // one in-order pipeline whose prefixes are materialized in sequence
  bool pure_chain() const;
  size_t operator_count() const;
  size_t hash_join_count() const;
};

struct Plan {
  std::unique_ptr<PlanNode> root;
  double est_cost = 0.0;
  double est_card = 0.0;

  Plan() = default;
  explicit Plan(std::unique_ptr<PlanNode> r) : root(std::move(r)) {}
  Plan clone() const;

  // shape key for deduplication; independent of cost annotations
  std::string signature() const;
  // indented operator tree with sub-queries, descriptors, and estimates
  std::string explain(const QueryGraph& q) const;
};

// Scan of one query edge, emitting (src, dst) 2-matches.
std::unique_ptr<PlanNode> make_scan(const QueryGraph& q, uint32_t edge_idx);
// Extend `child` to also cover `target`; descriptors are derived from every
// query edge between target and the child's vertices. Throws if none exist.
std::unique_ptr<PlanNode> make_extend(const QueryGraph& q, std::unique_ptr<PlanNode> child,
                                      uint32_t target);
std::unique_ptr<PlanNode> make_hash_join(std::unique_ptr<PlanNode> build,
                                         std::unique_ptr<PlanNode> probe);

// Structural invariants: out_order consistency, connected sub-queries, the
// induced-edge cover rule for joins, and descriptor completeness. Throws
// ValidationError on violation.
void validate_plan(const Plan& p, const QueryGraph& q);

}  // namespace sgq
