#pragma once

#include <cstdint>
#include <limits>

#include "sgq/graph.hpp"
#include "sgq/query.hpp"

namespace sgq {

// Exhaustive backtracking count of label-consistent assignments. Independent
// of the planner, executor, and catalogue by construction; deliberately naive.
// Patterns above max_vertices are refused unless force is set.
uint64_t brute_force_count(const QueryGraph& q, const Graph& g,
                           Semantics semantics = Semantics::Homomorphic, bool force = false,
                           size_t max_vertices = 8);

// max(est/truth, truth/est); >= 1. Both-zero counts as exact (1); a single
// zero yields +infinity.
double q_error(double est, double truth);

constexpr double kQErrorInfinite = std::numeric_limits<double>::infinity();

}  // namespace sgq
