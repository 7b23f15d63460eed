#include "afslab/exact.hpp"

#include <algorithm>
#include <chrono>

namespace afslab {

namespace {

class BoundedSearch {
public:
    explicit BoundedSearch(const Instance& inst) : engine_(inst), budget_(inst.budget) {
        // keep only candidates that fit the budget alone; order by
        // singleton gain (descending), node id on ties
        const CoverageEngine::State base = engine_.make_state(StationPlan{});
        base_objective_ = base.objective;
        struct Entry {
            std::size_t index;
            double gain;
        };
        std::vector<Entry> entries;
        for (std::size_t c = 0; c < engine_.candidates().size(); ++c) {
            if (engine_.candidate_cost(c) > budget_ + kFeasEps) continue;
            CoverageEngine::State trial = base;
            engine_.open_station(trial, engine_.candidates()[c]);
            entries.push_back({c, trial.objective - base.objective});
        }
        std::stable_sort(entries.begin(), entries.end(),
                         [&](const Entry& a, const Entry& b) {
                             if (a.gain != b.gain) return a.gain > b.gain;
                             return engine_.candidates()[a.index] <
                                    engine_.candidates()[b.index];
                         });
        for (const Entry& e : entries) by_gain_.push_back(e.index);
        by_id_ = by_gain_;
        std::sort(by_id_.begin(), by_id_.end());
    }

    const CoverageEngine& engine() const { return engine_; }
    std::uint64_t nodes() const { return nodes_; }
    void seed_incumbent(double value) { best_value_ = std::max(best_value_, value); }

    /// Phase: optimal value by depth-first branch-and-bound.
    double run() {
        best_value_ = std::max(best_value_, base_objective_);
        maximize(engine_.make_state(StationPlan{}), 0, 0.0);
        return best_value_;
    }

    /// Phase: lexicographically smallest plan reaching `target`, grown by
    /// forcing the smallest next node that still admits a completion.
    std::vector<NodeId> lexmin_plan(double target) {
        CoverageEngine::State st = engine_.make_state(StationPlan{});
        std::vector<NodeId> chosen;
        double spent = 0.0;
        std::size_t from = 0;
        while (st.objective < target) {
            bool extended = false;
            for (std::size_t i = from; i < by_id_.size(); ++i) {
                const std::size_t c = by_id_[i];
                const double cost = engine_.candidate_cost(c);
                if (spent + cost > budget_ + kFeasEps) continue;
                CoverageEngine::State child = st;
                engine_.open_station(child, engine_.candidates()[c]);
                if (bound(child, by_id_, i + 1, spent + cost) < target) continue;
                if (completion_exists(child, i + 1, spent + cost, target)) {
                    chosen.push_back(engine_.candidates()[c]);
                    st = std::move(child);
                    spent += cost;
                    from = i + 1;
                    extended = true;
                    break;
                }
            }
            if (!extended)
                throw Error("internal search inconsistency: optimal value unreachable");
        }
        return chosen;
    }

private:
    // objective of st plus every remaining individually-affordable
    // candidate — an upper bound for the whole subtree by monotonicity
    double bound(const CoverageEngine::State& st, const std::vector<std::size_t>& order,
                 std::size_t from, double spent) const {
        CoverageEngine::State relaxed = st;
        for (std::size_t i = from; i < order.size(); ++i) {
            if (spent + engine_.candidate_cost(order[i]) > budget_ + kFeasEps) continue;
            engine_.open_station(relaxed, engine_.candidates()[order[i]]);
        }
        return relaxed.objective;
    }

    void maximize(const CoverageEngine::State& st, std::size_t from, double spent) {
        ++nodes_;
        for (std::size_t i = from; i < by_gain_.size(); ++i) {
            const std::size_t c = by_gain_[i];
            const double cost = engine_.candidate_cost(c);
            if (spent + cost > budget_ + kFeasEps) continue;
            CoverageEngine::State child = st;
            engine_.open_station(child, engine_.candidates()[c]);
            best_value_ = std::max(best_value_, child.objective);
            if (bound(child, by_gain_, i + 1, spent + cost) > best_value_ + kFeasEps)
                maximize(child, i + 1, spent + cost);
        }
    }

    bool completion_exists(const CoverageEngine::State& st, std::size_t from,
                           double spent, double target) {
        ++nodes_;
        if (st.objective >= target) return true;
        for (std::size_t i = from; i < by_id_.size(); ++i) {
            const std::size_t c = by_id_[i];
            const double cost = engine_.candidate_cost(c);
            if (spent + cost > budget_ + kFeasEps) continue;
            CoverageEngine::State child = st;
            engine_.open_station(child, engine_.candidates()[c]);
            if (bound(child, by_id_, i + 1, spent + cost) < target) continue;
            if (completion_exists(child, i + 1, spent + cost, target)) return true;
        }
        return false;
    }

    CoverageEngine engine_;
    double budget_;
    double base_objective_ = 0.0;
    double best_value_ = 0.0;
    std::vector<std::size_t> by_gain_;  // branch order for the value search
    std::vector<std::size_t> by_id_;    // branch order for lex extraction
    std::uint64_t nodes_ = 0;
};

}  // namespace

SolveResult solve_exact(const Instance& inst) {
    const auto start = std::chrono::steady_clock::now();
    BoundedSearch search(inst);

    // warm start: greedy incumbent tightens pruning from the first node
    search.seed_incumbent(search.engine().evaluate(greedy_plan(inst)));

    const double best_value = search.run();
    const auto plan_nodes = search.lexmin_plan(best_value - kFeasEps);

    SolveResult result;
    result.plan = make_plan(inst, plan_nodes);
    result.objective = search.engine().evaluate(result.plan);
    result.proven_optimal = true;
    result.nodes_explored = search.nodes();
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

SolveResult brute_force(const Instance& inst) {
    if (inst.candidates.size() > 16)
        throw GuardError("brute force supports at most 16 candidates, got " +
                         std::to_string(inst.candidates.size()));
    const auto start = std::chrono::steady_clock::now();
    const CoverageEngine engine(inst);
    const std::size_t n = inst.candidates.size();

    SolveResult result;
    bool have_best = false;
    std::vector<NodeId> best_nodes;
    double best_value = 0.0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        double cost = 0.0;
        std::vector<NodeId> nodes;
        for (std::size_t c = 0; c < n; ++c)
            if (mask & (1ull << c)) {
                cost += engine.candidate_cost(c);
                nodes.push_back(inst.candidates[c]);
            }
        if (cost > inst.budget + kFeasEps) continue;
        const double value = engine.evaluate(StationPlan::of(nodes));
        ++result.nodes_explored;
        if (!have_best || value > best_value + kFeasEps) {
            have_best = true;
            best_value = value;
            best_nodes = std::move(nodes);
        } else if (value >= best_value - kFeasEps && nodes < best_nodes) {
            best_value = std::max(best_value, value);
            best_nodes = std::move(nodes);
        }
    }
    result.plan = make_plan(inst, best_nodes);
    result.objective = engine.evaluate(result.plan);
    result.proven_optimal = true;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace afslab
