#pragma once

#include <map>
#include <vector>

#include "sgq/catalogue.hpp"
#include "sgq/plan.hpp"
#include "sgq/query.hpp"

namespace sgq {

struct CostWeights {
  double w1 = 3.0;  // hash build weight
  double w2 = 1.0;  // probe weight
};

struct PlanCost {
  double total = 0.0;
  std::vector<double> per_operator;  // pre-order over the plan tree
  // estimated cardinality per covered vertex subset (sorted ids)
  std::map<std::vector<uint32_t>, double> cardinalities;
};

// Sum of list sizes, each multiplied by min(charge_cards[i], card_source).
// charge_cards[i] is the cardinality of the smallest materialized prefix
// covering descriptor i's sources; pass card_source to charge a list fully.
double icost_extend(double card_source, const std::vector<double>& list_sizes,
                    const std::vector<double>& charge_cards);

double cost_hash_join(double n1, double n2, const CostWeights& w);

// Cardinality estimates depend only on the covered vertex subset, so callers
// costing many plans over one query can share a cache across calls.
using CardCache = std::map<std::vector<uint32_t>, double>;

// Costs every operator, annotating est_card / est_cost on the (mutable) plan
// nodes. Cache-conscious mode discounts descriptor groups that do not touch
// the last matched vertex inside pure Scan+Extend pipelines.
PlanCost plan_cost(Plan& p, const QueryGraph& q, const Catalogue& cat, const CostWeights& w,
                   bool cache_conscious = true, CardCache* shared_cards = nullptr);

struct EiSample {
  double icost;
  double seconds;
};
struct JoinSample {
  double n1;
  double n2;
  double seconds;
};
struct CalibrationResult {
  CostWeights weights;
  bool degenerate = false;  // defaults retained
};

// Least squares: seconds-per-i-cost from the E/I samples converts join times
// into i-cost units, then (w1, w2) minimizes the squared residuals of
// w1*n1 + w2*n2. Insufficient or collinear samples keep the defaults.
CalibrationResult calibrate_weights(const std::vector<EiSample>& ei,
                                    const std::vector<JoinSample>& joins,
                                    const CostWeights& defaults = {});

}  // namespace sgq
