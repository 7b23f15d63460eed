#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "afslab/coverage.hpp"
#include "afslab/exact.hpp"

namespace afslab {

/// One population member: open/closed flags over the instance's candidate
/// list, the budget-feasible plan obtained by repair, and its objective.
/// After repair the bits always agree with the plan.
struct Individual {
    std::vector<char> bits;
    StationPlan plan;
    double fitness = 0.0;
};

struct GAConfig {
    int population = 100;           // at least 4 (tournament draws four)
    int generations = 200;
    int children = 10;              // children produced per generation
    std::optional<double> p_mut;    // bit flip rate; default 2 / |candidates|
    unsigned seed = 1;
    // The fitness-based crossover is applied per gene by default; this
    // switch selects the literal whole-solution variant (the child becomes
    // one parent's entire bitstring), kept for comparison.
    bool literal_crossover = false;
};

struct GenerationStats {
    int generation = 0;  // 0 is the initial population
    double best = 0.0;
    double mean = 0.0;
    double worst = 0.0;
};

/// Draws four distinct members uniformly, splits them in draw order into
/// two pools of two, and returns the index of the fitter member of each
/// pool (ties go to the first drawn). The two parents are always distinct.
std::pair<std::size_t, std::size_t> tournament_select(
    const std::vector<Individual>& population, std::mt19937& rng);

/// Fitness-based crossover. Per gene: agreeing bits are copied; where the
/// parents differ the child takes P1's bit with probability
/// f2 / (f1 + f2), else P2's (both fitnesses zero: a fair coin). Identical
/// parents produce an exact copy. The literal variant makes one such draw
/// for the whole bitstring instead.
std::vector<char> fusion_crossover(const Individual& p1, const Individual& p2,
                                   std::mt19937& rng,
                                   bool literal_whole_solution = false);

/// Copies the worst member's bitstring and flips each bit independently
/// when a fresh uniform(0,1) draw falls below p_mut.
std::vector<char> mutate_worst(const std::vector<Individual>& population,
                               double p_mut, std::mt19937& rng);

/// Closes open stations with the smallest singleton objective gain (ties
/// broken uniformly at random) until the plan fits the budget.
StationPlan repair_budget(const std::vector<char>& bits, const Instance& inst,
                          std::mt19937& rng);

/// Steady-state replacement: a child whose repaired plan duplicates any
/// current member is dropped; each survivor evicts the currently worst
/// member. Population size is preserved.
void replace(std::vector<Individual>& population,
             std::vector<Individual> children);

/// Runs the heuristic: an initial population of random budget-saturated
/// plans plus the greedy plan, then cfg.generations rounds each producing
/// cfg.children children (crossover and mutation children alternating,
/// crossover first), evaluated after budget repair and merged by replace().
/// Returns the best member; proven_optimal is false and nodes_explored
/// counts fitness evaluations. Deterministic given cfg.seed. When log is
/// given, appends per-generation best/mean/worst fitness (generation 0 is
/// the initial population). Throws ValidationError on a bad config.
SolveResult run_ga(const Instance& inst, const GAConfig& cfg,
                   std::vector<GenerationStats>* log = nullptr);

/// CSV with header `generation,best,mean,worst`.
std::string ga_log_to_csv(const std::vector<GenerationStats>& log);

}  // namespace afslab
