#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "afslab/coverage.hpp"
#include "afslab/dataset.hpp"
#include "afslab/exact.hpp"
#include "testutil.hpp"

using namespace afslab;

namespace {

// Line 2 - 1 - 3 with candidates {2, 3} only: opening 2 and opening 3 give
// the same objective by symmetry, so the solver has a genuine tie.
Instance tie_star_instance() {
    auto net = std::make_shared<Network>(
        Network::build({1, 2, 3},
                       {{1, 2, 10.0}, {1, 3, 10.0}}, true));
    auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 1));
    std::map<NodeId, double> probs{{1, 1.0}, {2, 1.0}, {3, 1.0}};
    std::map<NodeId, double> costs{{2, 1.0}, {3, 1.0}};
    return make_instance(net, cat, probs, costs, 1.0, VehicleSpec(20.0, 10.0),
                         {2, 3});
}

}  // namespace

TEST_CASE("brute force on a single-candidate instance") {
    auto net = std::make_shared<Network>(
        Network::build({1, 2}, {{1, 2, 30.0}}, true));
    auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 1));
    std::map<NodeId, double> probs{{1, 0.5}, {2, 0.5}};
    std::map<NodeId, double> costs{{2, 1.0}};
    // Round trip is 60 at range 60 and start fuel 30: only a station at the
    // far node makes either direction work.
    Instance inst = make_instance(net, cat, probs, costs, 1.0,
                                  VehicleSpec(60.0, 30.0), {2});

    SolveResult res = brute_force(inst);
    CHECK(res.plan.nodes == std::vector<NodeId>{2});
    CHECK(res.objective == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res.proven_optimal);

    SolveResult ex = solve_exact(inst);
    CHECK(ex.plan.nodes == res.plan.nodes);
    CHECK(ex.objective == doctest::Approx(res.objective).epsilon(1e-12));
}

TEST_CASE("budget zero yields the empty plan") {
    std::mt19937 rng(411);
    Instance inst = testutil::random_instance(rng, 6, 4, 2, 0.0);
    SolveResult res = solve_exact(inst);
    CHECK(res.plan.nodes.empty());
    CHECK(res.plan.cost == 0.0);
    CHECK(res.objective ==
          doctest::Approx(evaluate_plan(inst, StationPlan::of({})).objective)
              .epsilon(1e-12));
    CHECK(res.proven_optimal);

    SolveResult bf = brute_force(inst);
    CHECK(bf.plan.nodes.empty());
    CHECK(bf.objective == doctest::Approx(res.objective).epsilon(1e-12));
}

TEST_CASE("saturated budget matches opening everything") {
    std::mt19937 rng(412);
    for (int trial = 0; trial < 10; ++trial) {
        Instance inst = testutil::random_instance(rng, 7, 5, 2, 7.0);
        const double all_open =
            evaluate_plan(inst, make_plan(inst, inst.candidates)).objective;
        SolveResult res = solve_exact(inst);
        CHECK(res.objective == doctest::Approx(all_open).epsilon(1e-12));
        CHECK(res.plan.cost <= inst.budget + 1e-12);
    }
}

TEST_CASE("symmetric tie resolves to the lexicographically smaller plan") {
    Instance inst = tie_star_instance();
    const double at2 = evaluate_plan(inst, make_plan(inst, {2})).objective;
    const double at3 = evaluate_plan(inst, make_plan(inst, {3})).objective;
    REQUIRE(at2 == at3);  // genuine tie by construction
    REQUIRE(at2 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    SolveResult res = solve_exact(inst);
    CHECK(res.plan.nodes == std::vector<NodeId>{2});
    CHECK(res.objective == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    SolveResult bf = brute_force(inst);
    CHECK(bf.plan.nodes == std::vector<NodeId>{2});
}

TEST_CASE("exact solver agrees with brute force on random instances") {
    std::mt19937 rng(2026);
    std::uniform_int_distribution<int> n_nodes(3, 8);
    std::uniform_int_distribution<int> extra(0, 4);
    std::uniform_int_distribution<int> kk(1, 2);
    std::uniform_int_distribution<int> bud(0, 4);
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 200; ++trial) {
        Instance inst = testutil::random_instance(rng, n_nodes(rng), extra(rng),
                                                  kk(rng), bud(rng));
        SolveResult ex = solve_exact(inst);
        SolveResult bf = brute_force(inst);
        CAPTURE(trial);
        CHECK(ex.objective == doctest::Approx(bf.objective).epsilon(1e-9));
        CHECK(ex.plan.nodes == bf.plan.nodes);
        CHECK(ex.plan.cost == doctest::Approx(bf.plan.cost).epsilon(1e-12));
        CHECK(ex.proven_optimal);
        CHECK(bf.proven_optimal);
        CHECK(ex.plan.cost <= inst.budget + 1e-12);
        // Reported objective must be the evaluator's verdict on the plan.
        CHECK(ex.objective ==
              doctest::Approx(evaluate_plan(inst, ex.plan).objective)
                  .epsilon(1e-12));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    CHECK(elapsed < 60.0);
}

TEST_CASE("optimistic bound dominates every completion of a partial plan") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 15; ++trial) {
        Instance inst = testutil::random_instance(rng, 6, 3, 2, 3.0);
        CoverageEngine engine(inst);
        const auto& cand = engine.candidates();

        // Random split into chosen / remaining.
        std::vector<NodeId> chosen;
        std::vector<NodeId> remaining;
        std::bernoulli_distribution coin(0.4);
        double spent = 0.0;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (coin(rng) && spent + engine.candidate_cost(i) <= inst.budget) {
                chosen.push_back(cand[i]);
                spent += engine.candidate_cost(i);
            } else {
                remaining.push_back(cand[i]);
            }
        }

        std::vector<NodeId> everything = chosen;
        for (NodeId id : remaining) {
            const auto it = std::find(cand.begin(), cand.end(), id);
            const double c = engine.candidate_cost(
                static_cast<std::size_t>(it - cand.begin()));
            if (spent + c <= inst.budget) everything.push_back(id);
        }
        const double bound =
            engine.evaluate(make_plan(inst, everything));

        // Exhaustively try every affordable completion.
        const std::size_t r = remaining.size();
        REQUIRE(r <= 10);
        for (std::size_t mask = 0; mask < (std::size_t{1} << r); ++mask) {
            std::vector<NodeId> nodes = chosen;
            double cost = spent;
            for (std::size_t i = 0; i < r; ++i) {
                if (mask & (std::size_t{1} << i)) {
                    nodes.push_back(remaining[i]);
                    const auto it = std::find(cand.begin(), cand.end(), remaining[i]);
                    cost += engine.candidate_cost(
                        static_cast<std::size_t>(it - cand.begin()));
                }
            }
            if (cost > inst.budget) continue;
            CHECK(engine.evaluate(make_plan(inst, nodes)) <= bound + 1e-12);
        }
    }
}

TEST_CASE("objective is nondecreasing in the budget") {
    std::mt19937 rng(909);
    for (int trial = 0; trial < 20; ++trial) {
        Instance inst = testutil::random_instance(rng, 7, 4, 2, 0.0);
        double prev = -1.0;
        for (int budget = 0; budget <= 5; ++budget) {
            SolveResult res = solve_exact(inst.with_budget(budget));
            CHECK(res.objective >= prev - 1e-12);
            prev = res.objective;
        }
    }
}

TEST_CASE("halving all probabilities preserves the optimal plan") {
    std::mt19937 rng(1313);
    for (int trial = 0; trial < 20; ++trial) {
        Instance inst = testutil::random_instance(rng, 7, 4, 2, 3.0);
        std::map<NodeId, double> halved = inst.probabilities;
        for (auto& [id, p] : halved) p /= 2.0;
        SolveResult full = solve_exact(inst);
        SolveResult half = solve_exact(inst.with_probabilities(halved));
        CHECK(full.plan.nodes == half.plan.nodes);
        CHECK(half.objective ==
              doctest::Approx(full.objective / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("brute force refuses large candidate sets") {
    auto net = std::make_shared<Network>(sioux_falls_network());
    auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 1));
    Instance inst = make_unit_cost_instance(net, cat, sioux_falls_probabilities(),
                                            3.0, VehicleSpec(100.0, 100.0));
    CHECK_THROWS_AS(brute_force(inst), GuardError);
}

TEST_CASE("solver is deterministic") {
    std::mt19937 rng(5150);
    Instance inst = testutil::random_instance(rng, 8, 5, 2, 3.0);
    SolveResult a = solve_exact(inst);
    SolveResult b = solve_exact(inst);
    CHECK(a.plan.nodes == b.plan.nodes);
    CHECK(a.objective == b.objective);
    CHECK(a.nodes_explored == b.nodes_explored);
    CHECK(a.nodes_explored >= 1);
    CHECK(a.wall_seconds >= 0.0);
}

TEST_CASE("full network at full range covers everything from any budget") {
    auto net = std::make_shared<Network>(sioux_falls_network());
    auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 3));
    Instance inst = make_unit_cost_instance(net, cat, sioux_falls_probabilities(),
                                            0.0, VehicleSpec(100.0, 100.0));
    // Round trips never exceed 46 miles here, so even the empty plan covers
    // every pair and the optimum sits at the ceiling.
    SolveResult res = solve_exact(inst);
    CHECK(res.plan.nodes.empty());
    CHECK(res.objective ==
          doctest::Approx(objective_ceiling(inst)).epsilon(1e-12));
}

TEST_CASE("exact solve on the full network at a tight range") {
    auto net = std::make_shared<Network>(sioux_falls_network());
    auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 3));
    Instance inst = make_unit_cost_instance(net, cat, sioux_falls_probabilities(),
                                            3.0, VehicleSpec(25.0, 25.0));
    const auto start = std::chrono::steady_clock::now();
    SolveResult res = solve_exact(inst);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    CHECK(res.plan.nodes.size() <= 3);
    CHECK(res.objective > 0.0);
    CHECK(res.objective <= objective_ceiling(inst) + 1e-12);
    CHECK(res.objective >=
          evaluate_plan(inst, greedy_plan(inst)).objective - 1e-12);
    // Budget growth can only help.
    SolveResult wider = solve_exact(inst.with_budget(4.0));
    CHECK(wider.objective >= res.objective - 1e-12);
    MESSAGE("tight-range exact solve took ", elapsed, "s, explored ",
            res.nodes_explored, " nodes");
    CHECK(elapsed < 60.0);
}
