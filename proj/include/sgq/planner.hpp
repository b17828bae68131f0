#pragma once

#include <vector>

#include "sgq/cost_model.hpp"
#include "sgq/plan.hpp"

namespace sgq {

// beyond this many query vertices the optimizer skips standalone ordering
// enumeration and prunes its sub-query map to a beam per level
constexpr size_t kLargeQueryThreshold = 10;
constexpr size_t kDefaultBeam = 5;
// exhaustive plan-space enumeration refuses larger queries unless forced
constexpr size_t kSpectrumGuard = 8;

struct CostedPlan {
  Plan plan;
  PlanCost cost;
};

// One pipeline plan per connected-prefix vertex ordering (orderings that only
// swap the two scanned vertices are the same plan). Costs are cache-conscious.
std::vector<CostedPlan> enumerate_wco_plans(const QueryGraph& q, const Catalogue& cat,
                                            const CostWeights& w);

// Dynamic program over connected vertex subsets: cheapest of a seeded
// pipeline, an extension of the best smaller plan, or a hash join of two
// stored plans. Dispatches to optimize_large beyond kLargeQueryThreshold.
Plan optimize(const QueryGraph& q, const Catalogue& cat, const CostWeights& w);

Plan optimize_large(const QueryGraph& q, const Catalogue& cat, const CostWeights& w,
                    size_t beam = kDefaultBeam);

// Every distinct plan shape in the full space, costed. Throws GuardError for
// queries over `guard` vertices unless forced.
std::vector<CostedPlan> enumerate_spectrum(const QueryGraph& q, const Catalogue& cat,
                                           const CostWeights& w, bool force = false,
                                           size_t guard = kSpectrumGuard);

}  // namespace sgq
