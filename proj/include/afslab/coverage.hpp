#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "afslab/netgraph.hpp"
#include "afslab/refuel.hpp"

namespace afslab {

/// One solvable problem: network + path catalog + demand probabilities +
/// station costs + budget + vehicle. Copies are cheap (network and catalog
/// are shared); the with_* helpers derive sweep variants.
struct Instance {
    std::shared_ptr<const Network> network;
    std::shared_ptr<const PathCatalog> catalog;
    std::map<NodeId, double> probabilities;  // p_r per origin
    std::map<NodeId, double> costs;          // C_i per candidate
    double budget = 0.0;
    VehicleSpec vehicle{1.0, 1.0};
    std::vector<NodeId> candidates;          // sorted; stations may open here
    std::map<NodeId, int> denominators;      // n_r per origin

    Instance with_budget(double m) const;
    Instance with_vehicle(VehicleSpec v) const;
    Instance with_probabilities(std::map<NodeId, double> probs) const;
    Instance with_catalog(std::shared_ptr<const PathCatalog> cat) const;

    double cost_of(NodeId id) const;  // throws ValidationError for non-candidates
};

/// Validates and assembles an instance. All nodes act as origins and
/// destinations; candidates default to every node, denominators to |N|
/// (self-pairs never count toward the numerator). Checks: probabilities in
/// [0,1] and present for every node, costs positive for every candidate,
/// budget >= 0, denominators >= max(1, |N|-1) so coverage stays in [0,1].
Instance make_instance(std::shared_ptr<const Network> network,
                       std::shared_ptr<const PathCatalog> catalog,
                       std::map<NodeId, double> probabilities,
                       std::map<NodeId, double> costs, double budget, VehicleSpec vehicle,
                       std::vector<NodeId> candidates = {},
                       std::map<NodeId, int> denominators = {});

/// Uniform-cost convenience (C_i = 1 for every node).
Instance make_unit_cost_instance(std::shared_ptr<const Network> network,
                                 std::shared_ptr<const PathCatalog> catalog,
                                 std::map<NodeId, double> probabilities, double budget,
                                 VehicleSpec vehicle);

/// Builds a plan against the instance: sorts, dedups, checks membership in
/// the candidate set, and fills in the total cost.
StationPlan make_plan(const Instance& inst, std::vector<NodeId> nodes);

struct PairCoverage {
    NodeId origin = 0;
    NodeId destination = 0;
    bool covered = false;
    int path_index = -1;  // catalog index of the first feasible path
};

struct CoverageReport {
    StationPlan plan;
    std::vector<PairCoverage> pairs;         // sorted by (origin, destination)
    std::map<NodeId, double> node_coverage;  // z_r
    double objective = 0.0;                  // sum of p_r * z_r
};

/// Scores a plan: each O-D pair is covered iff some catalog path is
/// feasible under the plan (paths tested shortest-first, short-circuit);
/// z_r = covered destinations / n_r; objective = sum p_r z_r. Budget is
/// not checked here — evaluation is total.
CoverageReport evaluate_plan(const Instance& inst, const StationPlan& plan);

/// Supremum of the objective: every non-self pair covered.
double objective_ceiling(const Instance& inst);

/// Deterministic greedy: repeatedly open the affordable candidate with the
/// largest marginal gain (ties to the smallest node id) until no candidate
/// adds value or fits the budget.
StationPlan greedy_plan(const Instance& inst);

/// Per-node breakdown CSV: `node,p_r,z_r,p_r_z_r` rows plus a total row.
std::string report_to_csv(const Instance& inst, const CoverageReport& report);

/// Full report as JSON (plan, objective, per-node and per-pair detail).
std::string report_to_json(const Instance& inst, const CoverageReport& report);

/// Flattened evaluator for the solvers: precomputes path layouts and
/// node-to-pair incidence once, then scores plans in microseconds and
/// supports incremental station opening for branch-and-bound.
class CoverageEngine {
public:
    explicit CoverageEngine(const Instance& inst);

    /// Objective of a plan (no report allocation).
    double evaluate(const StationPlan& plan) const;
    /// Same, with the plan given as open flags over the candidate list.
    double evaluate_bits(const std::vector<char>& open_by_candidate) const;

    CoverageReport report(const StationPlan& plan) const;

    /// Incremental evaluation state: open flags by network node index,
    /// covered flags by pair slot, and the running objective.
    struct State {
        std::vector<char> open;
        std::vector<char> pair_covered;
        double objective = 0.0;
    };
    State make_state(const StationPlan& plan) const;
    /// Opens one more station and updates coverage by rescanning only the
    /// still-uncovered pairs whose paths visit it.
    void open_station(State& st, NodeId id) const;

    const std::vector<NodeId>& candidates() const { return candidate_ids_; }
    double candidate_cost(std::size_t candidate_index) const {
        return candidate_costs_[candidate_index];
    }

private:
    struct PairData {
        NodeId origin, destination;
        double weight;  // p_r / n_r
        int path_begin, path_end;
    };
    struct PosStep {
        int node;             // network node index
        double dist_to_next;  // 0 at the last position
    };

    bool path_feasible(int path_index, const std::vector<char>& open) const;
    bool pair_covered_by(const PairData& pair, const std::vector<char>& open,
                         int* first_path = nullptr) const;

    std::shared_ptr<const Network> net_;
    double range_, initial_sof_;
    std::map<NodeId, int> denom_;
    std::vector<PairData> pairs_;
    std::vector<std::pair<int, int>> path_pos_;      // [begin, end) into positions_
    std::vector<PosStep> positions_;
    std::vector<std::vector<int>> node_pair_slots_;  // node index -> pair slots
    std::vector<NodeId> candidate_ids_;
    std::vector<double> candidate_costs_;
    std::vector<int> candidate_node_idx_;
};

}  // namespace afslab
