#pragma once

#include <cstdint>

#include "afslab/coverage.hpp"

namespace afslab {

struct SolveResult {
    StationPlan plan;
    double objective = 0.0;
    bool proven_optimal = false;
    std::uint64_t nodes_explored = 0;
    double wall_seconds = 0.0;
};

/// Exact maximization of the expected coverage over budget-feasible
/// candidate subsets. Depth-first branch-and-bound: candidates ordered by
/// descending singleton gain, optimistic bound = objective of the chosen
/// set plus every remaining individually-affordable candidate (valid by
/// plan monotonicity), prune at incumbent + 1e-9. Among optimal plans the
/// lexicographically smallest is returned. Deterministic.
SolveResult solve_exact(const Instance& inst);

/// Exhaustive enumeration of budget-feasible subsets; ties broken by the
/// lexicographically smallest plan. Guarded: throws GuardError when the
/// candidate set exceeds 16 nodes.
SolveResult brute_force(const Instance& inst);

}  // namespace afslab
