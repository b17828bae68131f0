#include "sgq/cost_model.hpp"

#include <algorithm>
#include <cmath>

namespace sgq {

double icost_extend(double card_source, const std::vector<double>& list_sizes,
                    const std::vector<double>& charge_cards) {
  double total = 0.0;
  for (size_t i = 0; i < list_sizes.size(); ++i)
    total += list_sizes[i] * std::min(charge_cards[i], card_source);
  return total;
}

double cost_hash_join(double n1, double n2, const CostWeights& w) {
  return w.w1 * n1 + w.w2 * n2;
}

namespace {

class Coster {
 public:
  Coster(const QueryGraph& q, const Catalogue& cat, const CostWeights& w, bool cache,
         CardCache* shared)
      : q_(q), cat_(cat), w_(w), cache_(cache), shared_(shared) {}

  double card(std::vector<uint32_t> subset) {
    std::sort(subset.begin(), subset.end());
    auto it = out.cardinalities.find(subset);
    if (it != out.cardinalities.end()) return it->second;
    double c;
    if (shared_ && shared_->count(subset)) {
      c = shared_->at(subset);
    } else {
      if (subset.size() == 1)
        c = static_cast<double>(cat_.vertex_count(q_.vertices()[subset[0]].label));
      else
        c = cat_.estimate_cardinality(q_.project(subset)).value;
      if (shared_) (*shared_)[subset] = c;
    }
    out.cardinalities[subset] = c;
    return c;
  }

  void visit(PlanNode& n) {
    size_t id = out.per_operator.size();
    out.per_operator.push_back(0.0);
    n.est_card = card(n.out_order);
    switch (n.kind) {
      case OpKind::Scan:
        n.est_cost = 0.0;  // lists are read, not intersected
        break;
      case OpKind::Extend: {
        visit(*n.child);
        QueryGraph prefix = q_.project_ordered(n.child->out_order);
        ExtensionEstimate est =
            cat_.estimate_extension(prefix, n.descriptors, q_.vertices()[n.target].label);
        double source = n.child->est_card;
        std::vector<double> charge(n.descriptors.size(), source);
        if (cache_ && n.child->pure_chain()) {
          // descriptors that skip the last matched vertex hit the cache once
          // per distinct covering-prefix match; the covering prefix must be a
          // real sub-query, i.e. span at least two vertices
          uint32_t last = static_cast<uint32_t>(n.child->out_order.size() - 1);
          uint32_t max_pos = 0;
          bool grouped = false;
          for (const auto& d : n.descriptors) {
            if (d.idx != last) {
              grouped = true;
              max_pos = std::max(max_pos, d.idx);
            }
          }
          if (grouped && max_pos >= 1) {
            std::vector<uint32_t> covering(n.child->out_order.begin(),
                                           n.child->out_order.begin() + max_pos + 1);
            double group_card = std::min(card(covering), source);
            for (size_t i = 0; i < n.descriptors.size(); ++i)
              if (n.descriptors[i].idx != last) charge[i] = group_card;
          }
        }
        n.est_cost = icost_extend(source, est.list_sizes, charge);
        break;
      }
      case OpKind::HashJoin: {
        visit(*n.build);
        visit(*n.probe);
        n.est_cost = cost_hash_join(n.build->est_card, n.probe->est_card, w_);
        break;
      }
    }
    out.per_operator[id] = n.est_cost;
    out.total += n.est_cost;
  }

  PlanCost out;

 private:
  const QueryGraph& q_;
  const Catalogue& cat_;
  const CostWeights& w_;
  bool cache_;
  CardCache* shared_;
};

}  // namespace

PlanCost plan_cost(Plan& p, const QueryGraph& q, const Catalogue& cat, const CostWeights& w,
                   bool cache_conscious, CardCache* shared_cards) {
  Coster c(q, cat, w, cache_conscious, shared_cards);
  if (p.root) c.visit(*p.root);
  p.est_cost = c.out.total;
  p.est_card = p.root ? p.root->est_card : 0.0;
  return std::move(c.out);
}

CalibrationResult calibrate_weights(const std::vector<EiSample>& ei,
                                    const std::vector<JoinSample>& joins,
                                    const CostWeights& defaults) {
  CalibrationResult r{defaults, true};
  if (ei.size() < 2 || joins.size() < 2) return r;

  double cc = 0.0, ct = 0.0;
  for (const auto& s : ei) {
    cc += s.icost * s.icost;
    ct += s.icost * s.seconds;
  }
  if (cc <= 0.0 || ct <= 0.0) return r;
  double alpha = ct / cc;  // seconds per i-cost unit

  double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
  for (const auto& s : joins) {
    double y = s.seconds / alpha;
    a11 += s.n1 * s.n1;
    a12 += s.n1 * s.n2;
    a22 += s.n2 * s.n2;
    b1 += s.n1 * y;
    b2 += s.n2 * y;
  }
  double det = a11 * a22 - a12 * a12;
  if (std::abs(det) <= 1e-12 * std::max(a11 * a22, 1.0)) return r;
  double w1 = (b1 * a22 - b2 * a12) / det;
  double w2 = (b2 * a11 - b1 * a12) / det;
  if (!(w1 > 0.0) || !(w2 > 0.0)) return r;
  return {{w1, w2}, false};
}

}  // namespace sgq
