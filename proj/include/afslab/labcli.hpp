#pragma once

#include <string>
#include <vector>

#include "afslab/coverage.hpp"

namespace afslab {

/// Settings shared by every command; the CLI binds its flags straight onto
/// this struct (flags override config-file values). Commands that need a
/// single budget use `budget` (negative means the command's default);
/// commands sweeping budgets use `budgets_text` (default 1..12).
struct ExperimentSpec {
    std::string network_file;   // empty: embedded benchmark network
    std::string probs_file;     // empty: embedded probability table
    std::string budgets_text;   // "a..b", "a,b,c", or "n"; empty: 1..12
    int budget = -1;            // single-budget commands; <0 = command default
    double range = 100.0;       // vehicle range (VR), miles
    double sof_fraction = 1.0;  // initial fuel as a fraction of the range
    int k = 3;                  // deviation paths per O-D pair
    std::string solver = "both";  // exact | ga | both
    int seeds = 50;             // heuristic repetitions for mean columns
    unsigned seed = 1;          // base random seed
    std::string out_dir = "afslab_out";
    int samples = 100;          // Monte-Carlo draws per budget
    bool per_node_draws = false;   // draw one start fuel per origin
    bool allow_large_exact = false;  // lift the 32-candidate exact guard
    // Heuristic knobs forwarded to GAConfig.
    int population = 100;
    int generations = 200;
    int children = 10;
    double p_mut = -1.0;        // <0: heuristic default (2 / |candidates|)
    std::vector<double> ranges = {100.0, 150.0, 200.0};  // sweep-range VRs
};

struct CommandResult {
    std::vector<std::string> files;  // paths written, in emission order
};

/// "a..b" (inclusive), comma list, or a single integer. ParseError on junk.
std::vector<int> parse_budget_list(const std::string& text);

/// Assembles the instance a spec describes: embedded or file-loaded network
/// and probabilities, K-path catalog, unit costs, vehicle from range and
/// sof_fraction, budget max(spec.budget, 0).
Instance make_spec_instance(const ExperimentSpec& spec);

/// Budget sweep with exact and/or heuristic columns plus a per-node
/// breakdown at the chosen budget (default 3). Writes table2.csv,
/// table3.csv, plans.json, node_coverage_by_budget.csv, schedules.csv,
/// ga_log.csv (when the heuristic runs) and published_comparison.csv (when the
/// exact solver runs).
CommandResult cmd_solve(const ExperimentSpec& spec);

/// Budget x vehicle-range sweep. Writes sweep_range.csv (budget,vr,
/// objective), critical_counts.csv (per VR: smallest budget reaching that
/// VR's maximum objective) and sweep_range_plans.json.
CommandResult cmd_sweep_range(const ExperimentSpec& spec);

/// Budget sweep at full and half initial fuel. Writes sweep_sof.csv
/// (budget,full_sof,half_sof) and sweep_sof_plans.json.
CommandResult cmd_sweep_sof(const ExperimentSpec& spec);

/// Per budget: solves once at full and once at half initial fuel, then
/// re-evaluates both plans under `samples` random start-fuel draws uniform
/// in (0, range) — scalar per scenario, or one draw per origin with
/// per_node_draws. Writes mc_sof_means.csv (budget + the two plan means),
/// mc_sof_cdf.csv (sorted objective columns at the chosen budget, default
/// 7) and mc_plans.json.
CommandResult cmd_monte_carlo_sof(const ExperimentSpec& spec);

/// Solves at the chosen budget (default 7) with the true probabilities and
/// with p_r set to 1, then reports per-node coverage of the low-p (<= 0.2)
/// and high-p (>= 0.8) nodes under both plans. Writes prob_ablation.csv
/// and prob_ablation_plans.json.
CommandResult cmd_prob_ablation(const ExperimentSpec& spec);

/// Builds the path catalog, reports timing on stdout, writes catalog.json.
CommandResult cmd_paths(const ExperimentSpec& spec);

/// Exports the instance's mixed-integer model to model.lp.
CommandResult cmd_export_milp(const ExperimentSpec& spec);

/// Full command-line entry point (subcommands: paths, solve, sweep-range,
/// sweep-sof, monte-carlo-sof, prob-ablation, export-milp). Returns the
/// process exit code: 0 success, 2 bad input, 3 guard trip.
int run_cli(int argc, char** argv);
/// Convenience overload for tests; args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace afslab
