#include "sgq/plan.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sgq {

std::unique_ptr<PlanNode> PlanNode::clone() const {
  auto n = std::make_unique<PlanNode>();
  n->kind = kind;
  n->out_order = out_order;
  n->scan_edge = scan_edge;
  n->descriptors = descriptors;
  n->target = target;
  n->join_vertices = join_vertices;
  n->symmetric_reuse = symmetric_reuse;
  n->reuse_columns = reuse_columns;
  n->adaptive_orders = adaptive_orders;
  n->est_card = est_card;
  n->est_cost = est_cost;
  if (child) n->child = child->clone();
  if (build) n->build = build->clone();
  if (probe) n->probe = probe->clone();
  return n;
}

bool PlanNode::pure_chain() const {
  if (kind == OpKind::Scan) return true;
  if (kind == OpKind::Extend) return child->pure_chain();
  return false;
}

size_t PlanNode::operator_count() const {
  switch (kind) {
    case OpKind::Scan:
      return 1;
    case OpKind::Extend:
      return 1 + child->operator_count();
    case OpKind::HashJoin:
      return 1 + build->operator_count() + probe->operator_count();
  }
  return 0;
}

size_t PlanNode::hash_join_count() const {
  switch (kind) {
    case OpKind::Scan:
      return 0;
    case OpKind::Extend:
      return child->hash_join_count();
    case OpKind::HashJoin:
      return 1 + build->hash_join_count() + probe->hash_join_count();
  }
  return 0;
}

Plan Plan::clone() const {
  Plan p;
  if (root) p.root = root->clone();
  p.est_cost = est_cost;
  p.est_card = est_card;
  return p;
}

namespace {

void signature_rec(const PlanNode& n, std::string& out) {
  switch (n.kind) {
    case OpKind::Scan:
      out += "S" + std::to_string(n.scan_edge);
      break;
    case OpKind::Extend: {
      out += "E(";
      signature_rec(*n.child, out);
      out += ";" + std::to_string(n.target) + ";";
      for (const auto& d : n.descriptors) {
        out += std::to_string(d.idx);
        out += d.dir == Dir::Forward ? 'f' : 'b';
        out += d.edge_label + ",";
      }
      out += ")";
      break;
    }
    case OpKind::HashJoin:
      out += "J(";
      signature_rec(*n.build, out);
      out += ",";
      signature_rec(*n.probe, out);
      out += ")";
      break;
  }
}

void explain_rec(const PlanNode& n, const QueryGraph& q, int depth, std::ostringstream& out) {
  for (int i = 0; i < depth; ++i) out << "  ";
  auto name = [&](uint32_t v) -> const std::string& { return q.vertices()[v].name; };
  switch (n.kind) {
    case OpKind::Scan: {
      const auto& e = q.edges()[n.scan_edge];
      out << "scan (" << name(e.src) << ")-[:" << e.label << "]->(" << name(e.dst) << ")";
      break;
    }
    case OpKind::Extend: {
      out << "extend " << name(n.target) << " <- intersect(";
      for (size_t i = 0; i < n.descriptors.size(); ++i) {
        const auto& d = n.descriptors[i];
        if (i) out << ", ";
        out << name(n.child->out_order[d.idx]) << " " << to_string(d.dir) << " :" << d.edge_label;
      }
      out << ")";
      if (!n.adaptive_orders.empty())
        out << " [adaptive, " << n.adaptive_orders.size() << " orders]";
      break;
    }
    case OpKind::HashJoin: {
      out << "hash-join on [";
      for (size_t i = 0; i < n.join_vertices.size(); ++i) {
        if (i) out << ",";
        out << name(n.join_vertices[i]);
      }
      out << "]";
      if (n.symmetric_reuse) out << " (symmetric reuse)";
      break;
    }
  }
  out << "  card=" << n.est_card << " cost=" << n.est_cost << "\n";
  if (n.kind == OpKind::Extend) explain_rec(*n.child, q, depth + 1, out);
  if (n.kind == OpKind::HashJoin) {
    explain_rec(*n.build, q, depth + 1, out);
    explain_rec(*n.probe, q, depth + 1, out);
  }
}

}  // namespace

std::string Plan::signature() const {
  std::string out;
  if (root) signature_rec(*root, out);
  return out;
}

std::string Plan::explain(const QueryGraph& q) const {
  std::ostringstream out;
  out << "plan cost=" << est_cost << " card=" << est_card << "\n";
  if (root) explain_rec(*root, q, 1, out);
  return out.str();
}

std::unique_ptr<PlanNode> make_scan(const QueryGraph& q, uint32_t edge_idx) {
  if (edge_idx >= q.edges().size()) throw ValidationError("scan edge index out of range");
  const auto& e = q.edges()[edge_idx];
  auto n = std::make_unique<PlanNode>();
  n->kind = OpKind::Scan;
  n->scan_edge = edge_idx;
  n->out_order = {e.src, e.dst};
  if (e.src == e.dst) throw ValidationError("self-loop query edges are not plannable");
  return n;
}

std::unique_ptr<PlanNode> make_extend(const QueryGraph& q, std::unique_ptr<PlanNode> child,
                                      uint32_t target) {
  if (target >= q.size()) throw ValidationError("extend target out of range");
  auto n = std::make_unique<PlanNode>();
  n->kind = OpKind::Extend;
  n->target = target;
  n->out_order = child->out_order;
  for (uint32_t v : n->out_order)
    if (v == target) throw ValidationError("extend target already matched");
  for (uint32_t pos = 0; pos < n->out_order.size(); ++pos) {
    uint32_t v = n->out_order[pos];
    for (const auto& e : q.edges()) {
      if (e.src == v && e.dst == target) n->descriptors.push_back({pos, Dir::Forward, e.label});
      if (e.src == target && e.dst == v) n->descriptors.push_back({pos, Dir::Backward, e.label});
    }
  }
  if (n->descriptors.empty())
    throw ValidationError("extend target is not adjacent to the matched vertices");
  n->out_order.push_back(target);
  n->child = std::move(child);
  return n;
}

std::unique_ptr<PlanNode> make_hash_join(std::unique_ptr<PlanNode> build,
                                         std::unique_ptr<PlanNode> probe) {
  auto n = std::make_unique<PlanNode>();
  n->kind = OpKind::HashJoin;
  std::set<uint32_t> in_build(build->out_order.begin(), build->out_order.end());
  for (uint32_t v : probe->out_order)
    if (in_build.count(v)) n->join_vertices.push_back(v);
  std::sort(n->join_vertices.begin(), n->join_vertices.end());
  if (n->join_vertices.empty()) throw ValidationError("hash join children share no vertices");
  n->out_order = build->out_order;
  for (uint32_t v : probe->out_order)
    if (!in_build.count(v)) n->out_order.push_back(v);
  if (n->out_order.size() == build->out_order.size() ||
      n->out_order.size() == probe->out_order.size())
    throw ValidationError("hash join child covers the whole parent sub-query");
  n->build = std::move(build);
  n->probe = std::move(probe);
  return n;
}

namespace {

void validate_node(const PlanNode& n, const QueryGraph& q) {
  std::set<uint32_t> cover(n.out_order.begin(), n.out_order.end());
  if (cover.size() != n.out_order.size()) throw ValidationError("plan node repeats a vertex");
  for (uint32_t v : n.out_order)
    if (v >= q.size()) throw ValidationError("plan node vertex out of range");
  if (!q.subset_connected(n.out_order)) throw ValidationError("plan node sub-query disconnected");

  switch (n.kind) {
    case OpKind::Scan: {
      if (n.scan_edge >= q.edges().size()) throw ValidationError("scan edge out of range");
      const auto& e = q.edges()[n.scan_edge];
      if (n.out_order != std::vector<uint32_t>{e.src, e.dst})
        throw ValidationError("scan output mismatches its edge");
      break;
    }
    case OpKind::Extend: {
      if (!n.child) throw ValidationError("extend without child");
      validate_node(*n.child, q);
      std::vector<uint32_t> expect = n.child->out_order;
      expect.push_back(n.target);
      if (n.out_order != expect)
        throw ValidationError("extend output must append the target to the child order");
      // descriptors must cover exactly the query edges between the target and
      // the already-matched vertices
      std::multiset<std::tuple<uint32_t, uint8_t, std::string>> want, got;
      for (uint32_t pos = 0; pos < n.child->out_order.size(); ++pos) {
        uint32_t v = n.child->out_order[pos];
        for (const auto& e : q.edges()) {
          if (e.src == v && e.dst == n.target) want.insert({pos, 0, e.label});
          if (e.src == n.target && e.dst == v) want.insert({pos, 1, e.label});
        }
      }
      for (const auto& d : n.descriptors)
        got.insert({d.idx, static_cast<uint8_t>(d.dir == Dir::Forward ? 0 : 1), d.edge_label});
      if (want != got) throw ValidationError("extend descriptors mismatch the query edges");
      if (got.empty()) throw ValidationError("extend with no descriptors");
      break;
    }
    case OpKind::HashJoin: {
      if (!n.build || !n.probe) throw ValidationError("hash join missing a child");
      validate_node(*n.build, q);
      validate_node(*n.probe, q);
      std::set<uint32_t> in_build(n.build->out_order.begin(), n.build->out_order.end());
      std::set<uint32_t> in_probe(n.probe->out_order.begin(), n.probe->out_order.end());
      std::vector<uint32_t> common;
      for (uint32_t v : in_build)
        if (in_probe.count(v)) common.push_back(v);
      if (n.join_vertices != common) throw ValidationError("hash join key mismatch");
      if (common.empty()) throw ValidationError("hash join children share no vertices");
      if (in_build == cover || in_probe == cover)
        throw ValidationError("hash join child covers the whole parent sub-query");
      // every induced edge of the parent sub-query must be enforced by a child
      for (const auto& e : q.edges()) {
        if (!cover.count(e.src) || !cover.count(e.dst)) continue;
        bool in_b = in_build.count(e.src) && in_build.count(e.dst);
        bool in_p = in_probe.count(e.src) && in_probe.count(e.dst);
        if (!in_b && !in_p)
          throw ValidationError("hash join drops an induced query edge");
      }
      break;
    }
  }
}

}  // namespace

void validate_plan(const Plan& p, const QueryGraph& q) {
  if (!p.root) throw ValidationError("empty plan");
  validate_node(*p.root, q);
  if (p.root->out_order.size() != q.size())
    throw ValidationError("plan does not cover the whole query");
}

}  // namespace sgq
