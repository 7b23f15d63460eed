#include "afslab/refuel.hpp"

#include <algorithm>
#include <sstream>

namespace afslab {

VehicleSpec::VehicleSpec(double range_, double initial_sof_)
    : range(range_), initial_sof(initial_sof_) {
    if (!(range > 0.0)) throw ValidationError("vehicle range must be positive");
    if (initial_sof < 0.0 || initial_sof > range)
        throw ValidationError("initial fuel must lie in [0, range]");
}

bool StationPlan::contains(NodeId id) const {
    return std::binary_search(nodes.begin(), nodes.end(), id);
}

StationPlan StationPlan::of(std::vector<NodeId> nodes, double cost) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    StationPlan p;
    p.nodes = std::move(nodes);
    p.cost = cost;
    return p;
}

bool operator==(const StationPlan& a, const StationPlan& b) {
    return a.nodes == b.nodes;
}

SimulationOutcome simulate_path(const RoundTripPath& path, const StationPlan& plan,
                                const VehicleSpec& v) {
    const std::size_t n = path.visits.size();
    RefuelSchedule ledger;
    ledger.stops.reserve(n);
    double fuel = v.initial_sof;
    for (std::size_t t = 0; t < n; ++t) {
        if (fuel < -kFeasEps) return {false, std::nullopt};
        RefuelStop stop;
        stop.node = path.visits[t];
        stop.arrival_fuel = fuel;
        // trip end excluded: the vehicle is home, topping up buys nothing
        if (t + 1 < n && plan.contains(stop.node)) stop.refueled = v.range - fuel;
        fuel = stop.arrival_fuel + stop.refueled;
        ledger.stops.push_back(stop);
        if (t + 1 < n) fuel -= path.prefix[t + 1] - path.prefix[t];
    }
    return {true, std::move(ledger)};
}

bool gap_profile(const RoundTripPath& path, const StationPlan& plan, const VehicleSpec& v) {
    const std::size_t n = path.visits.size();
    std::vector<std::size_t> open;
    for (std::size_t t = 0; t + 1 < n; ++t)
        if (plan.contains(path.visits[t])) open.push_back(t);
    if (open.empty()) return path.total_length() <= v.initial_sof + kFeasEps;
    if (path.prefix[open.front()] > v.initial_sof + kFeasEps) return false;
    for (std::size_t t = 0; t + 1 < open.size(); ++t)
        if (path.prefix[open[t + 1]] - path.prefix[open[t]] > v.range + kFeasEps)
            return false;
    return path.total_length() - path.prefix[open.back()] <= v.range + kFeasEps;
}

bool feasibility_oracle_dp(const RoundTripPath& path, const StationPlan& plan,
                           const VehicleSpec& v) {
    // Reachable fuel interval [lo, hi] at the current position; a refuel of
    // any amount in [0, range - fuel] is allowed at an open station, so the
    // interval stays contiguous.
    double lo = v.initial_sof, hi = v.initial_sof;
    const std::size_t n = path.visits.size();
    for (std::size_t t = 0; t + 1 < n; ++t) {
        if (plan.contains(path.visits[t])) hi = v.range;
        const double d = path.prefix[t + 1] - path.prefix[t];
        lo -= d;
        hi -= d;
        if (hi < -kFeasEps) return false;
        lo = std::max(lo, 0.0);  // trajectories below zero are dead
    }
    return true;
}

std::string schedule_to_csv(const RefuelSchedule& schedule) {
    std::ostringstream out;
    out << "node,arrival_fuel,refueled,departure_fuel\n";
    for (const RefuelStop& s : schedule.stops)
        out << s.node << ',' << fmt_double(s.arrival_fuel) << ',' << fmt_double(s.refueled)
            << ',' << fmt_double(s.departure_fuel()) << '\n';
    return out.str();
}

}  // namespace afslab
