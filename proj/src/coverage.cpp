#include "afslab/coverage.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace afslab {

namespace {

void validate_instance(const Instance& inst) {
    if (!inst.network) throw ValidationError("instance has no network");
    if (!inst.catalog) throw ValidationError("instance has no catalog");
    if (inst.budget < 0.0) throw ValidationError("budget must be nonnegative");
    if (inst.candidates.empty()) throw ValidationError("candidate set is empty");
    const auto& net = *inst.network;
    const int min_denom =
        std::max<int>(1, static_cast<int>(net.node_count()) - 1);
    for (NodeId id : net.nodes()) {
        auto p = inst.probabilities.find(id);
        if (p == inst.probabilities.end())
            throw ValidationError("missing probability for node " + std::to_string(id));
        if (p->second < 0.0 || p->second > 1.0)
            throw ValidationError("probability outside [0,1] for node " +
                                  std::to_string(id));
        auto d = inst.denominators.find(id);
        if (d == inst.denominators.end())
            throw ValidationError("missing denominator for node " + std::to_string(id));
        if (d->second < min_denom)
            throw ValidationError("denominator below destination count for node " +
                                  std::to_string(id));
    }
    for (NodeId id : inst.candidates) {
        if (!net.has_node(id))
            throw ValidationError("candidate " + std::to_string(id) +
                                  " is not a network node");
        auto c = inst.costs.find(id);
        if (c == inst.costs.end())
            throw ValidationError("missing cost for candidate " + std::to_string(id));
        if (!(c->second > 0.0))
            throw ValidationError("cost must be positive for candidate " +
                                  std::to_string(id));
    }
}

}  // namespace

Instance make_instance(std::shared_ptr<const Network> network,
                       std::shared_ptr<const PathCatalog> catalog,
                       std::map<NodeId, double> probabilities,
                       std::map<NodeId, double> costs, double budget, VehicleSpec vehicle,
                       std::vector<NodeId> candidates,
                       std::map<NodeId, int> denominators) {
    Instance inst;
    inst.network = std::move(network);
    inst.catalog = std::move(catalog);
    inst.probabilities = std::move(probabilities);
    inst.costs = std::move(costs);
    inst.budget = budget;
    inst.vehicle = vehicle;
    if (candidates.empty() && inst.network)
        candidates = inst.network->nodes();
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    inst.candidates = std::move(candidates);
    if (denominators.empty() && inst.network) {
        const int n = static_cast<int>(inst.network->node_count());
        for (NodeId id : inst.network->nodes()) denominators[id] = n;
    }
    inst.denominators = std::move(denominators);
    validate_instance(inst);
    return inst;
}

Instance make_unit_cost_instance(std::shared_ptr<const Network> network,
                                 std::shared_ptr<const PathCatalog> catalog,
                                 std::map<NodeId, double> probabilities, double budget,
                                 VehicleSpec vehicle) {
    std::map<NodeId, double> costs;
    for (NodeId id : network->nodes()) costs[id] = 1.0;
    return make_instance(std::move(network), std::move(catalog), std::move(probabilities),
                         std::move(costs), budget, vehicle);
}

Instance Instance::with_budget(double m) const {
    if (m < 0.0) throw ValidationError("budget must be nonnegative");
    Instance copy = *this;
    copy.budget = m;
    return copy;
}

Instance Instance::with_vehicle(VehicleSpec v) const {
    Instance copy = *this;
    copy.vehicle = v;
    return copy;
}

Instance Instance::with_probabilities(std::map<NodeId, double> probs) const {
    Instance copy = *this;
    copy.probabilities = std::move(probs);
    validate_instance(copy);
    return copy;
}

Instance Instance::with_catalog(std::shared_ptr<const PathCatalog> cat) const {
    Instance copy = *this;
    copy.catalog = std::move(cat);
    validate_instance(copy);
    return copy;
}

double Instance::cost_of(NodeId id) const {
    auto it = costs.find(id);
    if (it == costs.end() ||
        !std::binary_search(candidates.begin(), candidates.end(), id))
        throw ValidationError("node " + std::to_string(id) + " is not a candidate");
    return it->second;
}

StationPlan make_plan(const Instance& inst, std::vector<NodeId> nodes) {
    StationPlan plan = StationPlan::of(std::move(nodes));
    double cost = 0.0;
    for (NodeId id : plan.nodes) cost += inst.cost_of(id);
    plan.cost = cost;
    return plan;
}

double objective_ceiling(const Instance& inst) {
    const double destinations = static_cast<double>(inst.network->node_count()) - 1.0;
    double total = 0.0;
    for (NodeId r : inst.network->nodes())
        total += inst.probabilities.at(r) * destinations /
                 static_cast<double>(inst.denominators.at(r));
    return total;
}

// ---------------------------------------------------------------------------
// CoverageEngine

CoverageEngine::CoverageEngine(const Instance& inst)
    : net_(inst.network),
      range_(inst.vehicle.range),
      initial_sof_(inst.vehicle.initial_sof),
      denom_(inst.denominators) {
    node_pair_slots_.resize(net_->node_count());
    for (const auto& [key, trips] : inst.catalog->entries) {
        PairData pd;
        pd.origin = key.first;
        pd.destination = key.second;
        pd.weight = inst.probabilities.at(pd.origin) /
                    static_cast<double>(inst.denominators.at(pd.origin));
        pd.path_begin = static_cast<int>(path_pos_.size());
        for (const RoundTripPath& t : trips) {
            const int begin = static_cast<int>(positions_.size());
            for (std::size_t i = 0; i < t.visits.size(); ++i) {
                PosStep step;
                step.node = net_->index_of(t.visits[i]);
                step.dist_to_next =
                    i + 1 < t.visits.size() ? t.prefix[i + 1] - t.prefix[i] : 0.0;
                positions_.push_back(step);
            }
            path_pos_.emplace_back(begin, static_cast<int>(positions_.size()));
        }
        pd.path_end = static_cast<int>(path_pos_.size());
        const int slot = static_cast<int>(pairs_.size());
        pairs_.push_back(pd);
        // incidence: which pairs can change when a node opens
        std::vector<char> seen(net_->node_count(), 0);
        for (const RoundTripPath& t : trips)
            for (NodeId v : t.outbound.nodes)
                seen[static_cast<std::size_t>(net_->index_of(v))] = 1;
        for (std::size_t v = 0; v < seen.size(); ++v)
            if (seen[v]) node_pair_slots_[v].push_back(slot);
    }
    candidate_ids_ = inst.candidates;
    for (NodeId id : candidate_ids_) {
        candidate_costs_.push_back(inst.costs.at(id));
        candidate_node_idx_.push_back(net_->index_of(id));
    }
}

bool CoverageEngine::path_feasible(int path_index, const std::vector<char>& open) const {
    const auto [begin, end] = path_pos_[static_cast<std::size_t>(path_index)];
    double fuel = initial_sof_;
    for (int t = begin; t < end; ++t) {
        if (fuel < -kFeasEps) return false;
        const PosStep& step = positions_[static_cast<std::size_t>(t)];
        if (t + 1 < end && open[static_cast<std::size_t>(step.node)]) fuel = range_;
        fuel -= step.dist_to_next;
    }
    return true;
}

bool CoverageEngine::pair_covered_by(const PairData& pair, const std::vector<char>& open,
                                     int* first_path) const {
    for (int k = pair.path_begin; k < pair.path_end; ++k) {
        if (path_feasible(k, open)) {
            if (first_path) *first_path = k - pair.path_begin;
            return true;
        }
    }
    if (first_path) *first_path = -1;
    return false;
}

double CoverageEngine::evaluate(const StationPlan& plan) const {
    std::vector<char> open(net_->node_count(), 0);
    for (NodeId id : plan.nodes)
        open[static_cast<std::size_t>(net_->index_of(id))] = 1;
    double objective = 0.0;
    for (const PairData& pair : pairs_)
        if (pair_covered_by(pair, open)) objective += pair.weight;
    return objective;
}

double CoverageEngine::evaluate_bits(const std::vector<char>& open_by_candidate) const {
    std::vector<char> open(net_->node_count(), 0);
    for (std::size_t c = 0; c < open_by_candidate.size(); ++c)
        if (open_by_candidate[c])
            open[static_cast<std::size_t>(candidate_node_idx_[c])] = 1;
    double objective = 0.0;
    for (const PairData& pair : pairs_)
        if (pair_covered_by(pair, open)) objective += pair.weight;
    return objective;
}

CoverageReport CoverageEngine::report(const StationPlan& plan) const {
    std::vector<char> open(net_->node_count(), 0);
    for (NodeId id : plan.nodes)
        open[static_cast<std::size_t>(net_->index_of(id))] = 1;
    CoverageReport rep;
    rep.plan = plan;
    std::map<NodeId, int> covered_count;
    for (NodeId r : net_->nodes()) covered_count[r] = 0;
    rep.objective = 0.0;
    for (const PairData& pair : pairs_) {
        PairCoverage pc;
        pc.origin = pair.origin;
        pc.destination = pair.destination;
        pc.covered = pair_covered_by(pair, open, &pc.path_index);
        if (pc.covered) {
            ++covered_count[pair.origin];
            rep.objective += pair.weight;  // same accumulation as evaluate()
        }
        rep.pairs.push_back(pc);
    }
    for (const auto& [r, cnt] : covered_count)
        rep.node_coverage[r] =
            static_cast<double>(cnt) / static_cast<double>(denom_.at(r));
    return rep;
}

CoverageEngine::State CoverageEngine::make_state(const StationPlan& plan) const {
    State st;
    st.open.assign(net_->node_count(), 0);
    for (NodeId id : plan.nodes)
        st.open[static_cast<std::size_t>(net_->index_of(id))] = 1;
    st.pair_covered.assign(pairs_.size(), 0);
    st.objective = 0.0;
    for (std::size_t q = 0; q < pairs_.size(); ++q) {
        if (pair_covered_by(pairs_[q], st.open)) {
            st.pair_covered[q] = 1;
            st.objective += pairs_[q].weight;
        }
    }
    return st;
}

void CoverageEngine::open_station(State& st, NodeId id) const {
    const auto idx = static_cast<std::size_t>(net_->index_of(id));
    if (st.open[idx]) return;
    st.open[idx] = 1;
    for (int slot : node_pair_slots_[idx]) {
        if (st.pair_covered[static_cast<std::size_t>(slot)]) continue;
        const PairData& pair = pairs_[static_cast<std::size_t>(slot)];
        if (pair_covered_by(pair, st.open)) {
            st.pair_covered[static_cast<std::size_t>(slot)] = 1;
            st.objective += pair.weight;
        }
    }
}

// ---------------------------------------------------------------------------

CoverageReport evaluate_plan(const Instance& inst, const StationPlan& plan) {
    for (NodeId id : plan.nodes)
        if (!std::binary_search(inst.candidates.begin(), inst.candidates.end(), id))
            throw ValidationError("plan opens non-candidate node " + std::to_string(id));
    return CoverageEngine(inst).report(plan);
}

StationPlan greedy_plan(const Instance& inst) {
    const CoverageEngine engine(inst);
    CoverageEngine::State state = engine.make_state(StationPlan{});
    std::vector<NodeId> chosen;
    double spent = 0.0;
    std::vector<char> in_plan(engine.candidates().size(), 0);
    while (true) {
        int best = -1;
        double best_gain = kFeasEps;
        CoverageEngine::State best_state;
        for (std::size_t c = 0; c < engine.candidates().size(); ++c) {
            if (in_plan[c]) continue;
            if (spent + engine.candidate_cost(c) > inst.budget + kFeasEps) continue;
            CoverageEngine::State trial = state;
            engine.open_station(trial, engine.candidates()[c]);
            const double gain = trial.objective - state.objective;
            if (gain > best_gain) {
                best_gain = gain;
                best = static_cast<int>(c);
                best_state = std::move(trial);
            }
        }
        if (best < 0) break;
        in_plan[static_cast<std::size_t>(best)] = 1;
        chosen.push_back(engine.candidates()[static_cast<std::size_t>(best)]);
        spent += engine.candidate_cost(static_cast<std::size_t>(best));
        state = std::move(best_state);
    }
    return make_plan(inst, std::move(chosen));
}

std::string report_to_csv(const Instance& inst, const CoverageReport& report) {
    std::ostringstream out;
    out << "node,p_r,z_r,p_r_z_r\n";
    for (const auto& [r, z] : report.node_coverage) {
        const double p = inst.probabilities.at(r);
        out << r << ',' << fmt_double(p) << ',' << fmt_double(z) << ','
            << fmt_double(p * z) << '\n';
    }
    out << "total,,," << fmt_double(report.objective) << '\n';
    return out.str();
}

std::string report_to_json(const Instance& inst, const CoverageReport& report) {
    nlohmann::json root;
    root["plan"] = report.plan.nodes;
    root["plan_cost"] = report.plan.cost;
    root["objective"] = report.objective;
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [r, z] : report.node_coverage) {
        nlohmann::json n;
        n["node"] = r;
        n["probability"] = inst.probabilities.at(r);
        n["coverage"] = z;
        n["expected"] = inst.probabilities.at(r) * z;
        nodes.push_back(std::move(n));
    }
    root["nodes"] = std::move(nodes);
    nlohmann::json pairs = nlohmann::json::array();
    for (const PairCoverage& pc : report.pairs) {
        nlohmann::json p;
        p["from"] = pc.origin;
        p["to"] = pc.destination;
        p["covered"] = pc.covered;
        p["path_index"] = pc.path_index;
        pairs.push_back(std::move(p));
    }
    root["pairs"] = std::move(pairs);
    return root.dump(2) + "\n";
}

}  // namespace afslab
