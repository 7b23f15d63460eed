#pragma once

#include <optional>
#include <string>
#include <vector>

#include "afslab/netgraph.hpp"

namespace afslab {

/// Vehicle described in distance units: full range and fuel at trip start.
struct VehicleSpec {
    double range = 0.0;        // full-tank driving distance, > 0
    double initial_sof = 0.0;  // fuel at trip start, in [0, range]

    VehicleSpec(double range_, double initial_sof_);

    static VehicleSpec full(double range_) { return {range_, range_}; }
};

/// An open-station decision: sorted unique node ids plus the plan's total
/// installation cost (filled in when built against an instance).
struct StationPlan {
    std::vector<NodeId> nodes;
    double cost = 0.0;

    bool contains(NodeId id) const;
    std::size_t size() const { return nodes.size(); }

    /// Sorts and dedups; cost is taken as given (0 when irrelevant).
    static StationPlan of(std::vector<NodeId> nodes, double cost = 0.0);
};

bool operator==(const StationPlan& a, const StationPlan& b);

/// Fuel ledger for one round trip under the fill-to-full policy: one stop
/// per visited position.
struct RefuelStop {
    NodeId node = 0;
    double arrival_fuel = 0.0;
    double refueled = 0.0;

    double departure_fuel() const { return arrival_fuel + refueled; }
};

struct RefuelSchedule {
    std::vector<RefuelStop> stops;
};

struct SimulationOutcome {
    bool feasible = false;
    std::optional<RefuelSchedule> schedule;  // present iff feasible
};

/// Drives the round trip under the fill-to-full policy: start with
/// initial_sof, top up to full range at every open station visited before
/// the trip end, spend each link's distance. Feasible iff arrival fuel
/// never drops below zero (slack kFeasEps). Fill-to-full is exact because
/// stations are uncapacitated and refueling costless.
SimulationOutcome simulate_path(const RoundTripPath& path, const StationPlan& plan,
                                const VehicleSpec& v);

/// Same flag, computed from the gaps between consecutive open stations
/// along the trip instead of a fuel ledger.
bool gap_profile(const RoundTripPath& path, const StationPlan& plan, const VehicleSpec& v);

/// Independent check: forward interval dynamic program over the achievable
/// fuel range at each position under arbitrary partial refuel amounts.
/// Test oracle; agrees with simulate_path on every input.
bool feasibility_oracle_dp(const RoundTripPath& path, const StationPlan& plan,
                           const VehicleSpec& v);

/// CSV rows `node,arrival_fuel,refueled,departure_fuel` with header.
std::string schedule_to_csv(const RefuelSchedule& schedule);

}  // namespace afslab
