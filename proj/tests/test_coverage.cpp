#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <memory>
#include <random>

#include "afslab/coverage.hpp"
#include "afslab/dataset.hpp"
#include "testutil.hpp"

using namespace afslab;

namespace {

// Star with hub 1: spokes to 2, 3, 5 are 10 miles, the spoke to 4 is 60 —
// out of round-trip reach for a 100-mile tank without stations.
Instance star_instance(double budget = 0.0) {
    auto net = std::make_shared<Network>(load_network(
        "nodes=5 links=4 symmetric=1\n1 2 10\n1 3 10\n1 4 60\n1 5 10\n"));
    auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 1));
    std::map<NodeId, double> probs{{1, 1.0}, {2, 0.0}, {3, 0.0}, {4, 0.0}, {5, 0.0}};
    std::map<NodeId, int> denoms{{1, 4}, {2, 4}, {3, 4}, {4, 4}, {5, 4}};
    std::map<NodeId, double> costs;
    for (NodeId id : net->nodes()) costs[id] = 1.0;
    return make_instance(std::move(net), std::move(cat), std::move(probs),
                         std::move(costs), budget, VehicleSpec(100.0, 100.0), {},
                         std::move(denoms));
}

std::shared_ptr<const Network> sf_net() {
    return std::shared_ptr<const Network>(&sioux_falls_network(), [](const Network*) {});
}

Instance sioux_falls_instance(double budget, double range = 100.0,
                              double sof_fraction = 1.0, int k = 3) {
    auto cat = std::make_shared<PathCatalog>(build_catalog(sioux_falls_network(), k));
    return make_unit_cost_instance(sf_net(), std::move(cat), sioux_falls_probabilities(),
                                   budget, VehicleSpec(range, range * sof_fraction));
}

}  // namespace

TEST_CASE("three of four destinations covered gives coverage 3/4") {
    const Instance inst = star_instance();
    const auto rep = evaluate_plan(inst, StationPlan{});
    CHECK(rep.node_coverage.at(1) == 0.75);
    CHECK(rep.objective == doctest::Approx(0.75).epsilon(1e-12));
    for (const PairCoverage& pc : rep.pairs) {
        if (pc.origin != 1) continue;
        const bool expect = pc.destination != 4;
        CHECK(pc.covered == expect);
        CHECK(pc.path_index == (expect ? 0 : -1));
    }
}

TEST_CASE("a station at the far spoke completes the star") {
    const Instance inst = star_instance(1.0);
    const auto rep = evaluate_plan(inst, make_plan(inst, {4}));
    CHECK(rep.node_coverage.at(1) == 1.0);
    CHECK(rep.objective == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("objective ceiling arithmetic") {
    SUBCASE("uniform probability one, denominator 24") {
        auto cat = std::make_shared<PathCatalog>(build_catalog(sioux_falls_network(), 1));
        std::map<NodeId, double> ones;
        for (NodeId id : sioux_falls_network().nodes()) ones[id] = 1.0;
        const Instance inst = make_unit_cost_instance(sf_net(), std::move(cat),
                                                      std::move(ones), 0.0,
                                                      VehicleSpec(100.0, 100.0));
        CHECK(objective_ceiling(inst) == doctest::Approx(23.0).epsilon(1e-12));
    }
    SUBCASE("embedded probabilities") {
        CHECK(objective_ceiling(sioux_falls_instance(0.0)) ==
              doctest::Approx(10.696533333333335).epsilon(1e-12));
    }
    SUBCASE("single-node network has nothing to cover") {
        auto net = std::make_shared<Network>(Network::build({1}, {}, true));
        auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 1));
        const Instance inst = make_unit_cost_instance(net, cat, {{1, 0.9}}, 0.0,
                                                      VehicleSpec(10.0, 10.0));
        CHECK(objective_ceiling(inst) == 0.0);
        CHECK(evaluate_plan(inst, StationPlan{}).objective == 0.0);
    }
}

TEST_CASE("all stations open with a full 100-mile tank hits the ceiling") {
    const Instance inst = sioux_falls_instance(24.0);
    const auto rep = evaluate_plan(inst, make_plan(inst, inst.network->nodes()));
    for (const PairCoverage& pc : rep.pairs) CHECK(pc.covered);
    CHECK(rep.objective == doctest::Approx(10.6965).epsilon(5e-4));
    CHECK(rep.objective ==
          doctest::Approx(objective_ceiling(inst)).epsilon(1e-12));
}

TEST_CASE("every z_r is a multiple of 1/24 on the embedded dataset") {
    const Instance inst = sioux_falls_instance(3.0);
    const auto rep = evaluate_plan(inst, make_plan(inst, {3, 6, 16}));
    for (const auto& [r, z] : rep.node_coverage) {
        const double scaled = z * 24.0;
        CHECK(scaled == doctest::Approx(std::round(scaled)).epsilon(1e-9));
    }
    // objective equals the per-node breakdown sum
    double total = 0.0;
    for (const auto& [r, z] : rep.node_coverage) total += inst.probabilities.at(r) * z;
    CHECK(rep.objective == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("report agrees with the path simulator on random instances") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 25; ++trial) {
        const Instance inst =
            testutil::random_instance(rng, 4 + static_cast<int>(rng() % 5), 4, 2, 3.0);
        const auto plan = make_plan(
            inst, testutil::random_plan(rng, *inst.network, 0.3).nodes);
        const auto rep = evaluate_plan(inst, plan);
        std::map<NodeId, int> covered_count;
        for (NodeId id : inst.network->nodes()) covered_count[id] = 0;
        double weight_sum = 0.0;
        for (const PairCoverage& pc : rep.pairs) {
            const auto& paths = inst.catalog->paths(pc.origin, pc.destination);
            int first = -1;
            for (std::size_t k = 0; k < paths.size(); ++k) {
                if (simulate_path(paths[k], plan, inst.vehicle).feasible) {
                    first = static_cast<int>(k);
                    break;
                }
            }
            CHECK(pc.covered == (first >= 0));
            CHECK(pc.path_index == first);
            if (pc.covered) {
                ++covered_count[pc.origin];
                weight_sum += inst.probabilities.at(pc.origin) /
                              inst.denominators.at(pc.origin);
            }
        }
        for (const auto& [r, z] : rep.node_coverage)
            CHECK(z == doctest::Approx(static_cast<double>(covered_count[r]) /
                                       inst.denominators.at(r))
                           .epsilon(1e-12));
        CHECK(rep.objective == doctest::Approx(weight_sum).epsilon(1e-12));
    }
}

TEST_CASE("objective is monotone under plan growth") {
    std::mt19937 rng(18181);
    for (int trial = 0; trial < 30; ++trial) {
        const Instance inst =
            testutil::random_instance(rng, 5 + static_cast<int>(rng() % 4), 4, 2, 8.0);
        auto small = testutil::random_plan(rng, *inst.network, 0.25).nodes;
        auto large = small;
        for (NodeId id : inst.network->nodes())
            if (rng() % 3 == 0) large.push_back(id);
        const double lo = evaluate_plan(inst, make_plan(inst, small)).objective;
        const double hi = evaluate_plan(inst, make_plan(inst, large)).objective;
        CHECK(hi >= lo - 1e-12);
    }
}

TEST_CASE("enlarging the catalog never uncovers a pair") {
    std::mt19937 rng(27272);
    for (int trial = 0; trial < 15; ++trial) {
        auto net = std::make_shared<Network>(
            testutil::random_network(rng, 5 + static_cast<int>(rng() % 4), 5));
        auto cat1 = std::make_shared<PathCatalog>(build_catalog(*net, 1));
        auto cat3 = std::make_shared<PathCatalog>(build_catalog(*net, 3));
        std::map<NodeId, double> probs;
        for (NodeId id : net->nodes()) probs[id] = 0.5;
        const double range = 8.0 + (rng() % 10);
        const VehicleSpec v(range, range);
        const Instance i1 = make_unit_cost_instance(net, cat1, probs, 4.0, v);
        const Instance i3 = make_unit_cost_instance(net, cat3, probs, 4.0, v);
        const auto plan = make_plan(i1, testutil::random_plan(rng, *net, 0.3).nodes);
        const auto r1 = evaluate_plan(i1, plan);
        const auto r3 = evaluate_plan(i3, plan);
        REQUIRE(r1.pairs.size() == r3.pairs.size());
        for (std::size_t q = 0; q < r1.pairs.size(); ++q)
            if (r1.pairs[q].covered) CHECK(r3.pairs[q].covered);
        CHECK(r3.objective >= r1.objective - 1e-12);
    }
}

TEST_CASE("full candidate set with range above the longest link covers everything") {
    std::mt19937 rng(99221);
    for (int trial = 0; trial < 10; ++trial) {
        auto net = std::make_shared<Network>(
            testutil::random_network(rng, 4 + static_cast<int>(rng() % 5), 4));
        auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 1));
        std::map<NodeId, double> probs;
        for (NodeId id : net->nodes()) probs[id] = 0.7;
        const double beta = net->max_link_distance();
        const Instance inst = make_unit_cost_instance(
            net, cat, probs, static_cast<double>(net->node_count()),
            VehicleSpec(beta, beta));
        const auto rep = evaluate_plan(inst, make_plan(inst, net->nodes()));
        for (const PairCoverage& pc : rep.pairs) CHECK(pc.covered);
        CHECK(rep.objective ==
              doctest::Approx(objective_ceiling(inst)).epsilon(1e-12));
    }
}

TEST_CASE("scaling every probability scales the objective") {
    const Instance inst = sioux_falls_instance(5.0);
    std::map<NodeId, double> halved;
    for (const auto& [id, p] : inst.probabilities) halved[id] = p / 2.0;
    const Instance half = inst.with_probabilities(halved);
    const auto plan = make_plan(inst, {3, 6, 10, 16, 20});
    CHECK(evaluate_plan(half, plan).objective ==
          doctest::Approx(evaluate_plan(inst, plan).objective / 2.0).epsilon(1e-12));
}

TEST_CASE("incremental engine state matches whole-plan evaluation") {
    std::mt19937 rng(31415);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst =
            testutil::random_instance(rng, 5 + static_cast<int>(rng() % 4), 5, 2, 9.0);
        const CoverageEngine engine(inst);
        auto nodes = testutil::random_plan(rng, *inst.network, 0.4).nodes;
        CoverageEngine::State st = engine.make_state(StationPlan{});
        for (NodeId id : nodes) engine.open_station(st, id);
        const auto plan = make_plan(inst, nodes);
        CHECK(st.objective == doctest::Approx(engine.evaluate(plan)).epsilon(1e-12));
        CHECK(st.objective ==
              doctest::Approx(engine.make_state(plan).objective).epsilon(1e-12));
        CHECK(st.objective ==
              doctest::Approx(evaluate_plan(inst, plan).objective).epsilon(1e-12));
        // opening an already-open station changes nothing
        if (!nodes.empty()) {
            engine.open_station(st, nodes.front());
            CHECK(st.objective == doctest::Approx(engine.evaluate(plan)).epsilon(1e-12));
        }
    }
}

TEST_CASE("bit-vector evaluation matches plan evaluation") {
    std::mt19937 rng(80000);
    const Instance inst = sioux_falls_instance(6.0);
    const CoverageEngine engine(inst);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<char> bits(inst.candidates.size(), 0);
        std::vector<NodeId> nodes;
        for (std::size_t c = 0; c < bits.size(); ++c)
            if (rng() % 4 == 0) {
                bits[c] = 1;
                nodes.push_back(inst.candidates[c]);
            }
        CHECK(engine.evaluate_bits(bits) ==
              doctest::Approx(engine.evaluate(make_plan(inst, nodes))).epsilon(1e-12));
    }
}

TEST_CASE("greedy planning respects the budget and picks the clear winner") {
    const Instance inst = star_instance(1.0);
    const auto plan = greedy_plan(inst);
    // node 4 is the only single station that rescues the one weighted pair
    CHECK(plan.nodes == std::vector<NodeId>{4});
    CHECK(plan.cost == 1.0);
    const Instance sf = sioux_falls_instance(5.0);
    const auto sf_plan = greedy_plan(sf);
    CHECK(sf_plan.cost <= sf.budget + 1e-9);
    CHECK(sf_plan.nodes == greedy_plan(sf).nodes);  // deterministic
}

TEST_CASE("plans must draw from the candidate set") {
    const Instance inst = star_instance(2.0);
    CHECK_THROWS_AS(make_plan(inst, {9}), ValidationError);
    StationPlan foreign = StationPlan::of({9});
    CHECK_THROWS_AS(evaluate_plan(inst, foreign), ValidationError);
    CHECK(make_plan(inst, {2, 1, 2}).nodes == std::vector<NodeId>{1, 2});
    CHECK(make_plan(inst, {2, 1}).cost == 2.0);
}

TEST_CASE("instance validation rejects bad inputs") {
    auto net = std::make_shared<Network>(load_network(
        "nodes=2 links=1 symmetric=1\n1 2 5\n"));
    auto cat = std::make_shared<PathCatalog>(build_catalog(*net, 1));
    const VehicleSpec v(10.0, 10.0);
    std::map<NodeId, double> probs{{1, 0.5}, {2, 0.5}};
    CHECK_THROWS_AS(make_unit_cost_instance(net, cat, {{1, 0.5}}, 1.0, v),
                    ValidationError);  // probability missing for node 2
    CHECK_THROWS_AS(make_unit_cost_instance(net, cat, {{1, 0.5}, {2, 1.5}}, 1.0, v),
                    ValidationError);  // probability out of range
    CHECK_THROWS_AS(make_unit_cost_instance(net, cat, probs, -1.0, v),
                    ValidationError);  // negative budget
    CHECK_THROWS_AS(make_instance(net, cat, probs, {{1, 1.0}, {2, 0.0}}, 1.0, v),
                    ValidationError);  // nonpositive cost
    CHECK_THROWS_AS(make_instance(net, cat, probs, {{1, 1.0}, {2, 1.0}}, 1.0, v,
                                  {1, 7}),
                    ValidationError);  // candidate outside the network
    CHECK_THROWS_AS(make_instance(net, cat, probs, {{1, 1.0}, {2, 1.0}}, 1.0, v, {},
                                  {{1, 0}, {2, 1}}),
                    ValidationError);  // denominator below destination count
    CHECK_THROWS_AS(make_unit_cost_instance(net, cat, probs, 1.0, v).with_budget(-2.0),
                    ValidationError);
}

TEST_CASE("report serializes to CSV and JSON") {
    const Instance inst = star_instance(1.0);
    const auto rep = evaluate_plan(inst, make_plan(inst, {4}));
    const std::string csv = report_to_csv(inst, rep);
    // origin 4 stays dark: every return leg ends with the 60-mile spoke on
    // at most 40 miles of fuel
    CHECK(csv ==
          "node,p_r,z_r,p_r_z_r\n"
          "1,1,1,1\n"
          "2,0,1,0\n"
          "3,0,1,0\n"
          "4,0,0,0\n"
          "5,0,1,0\n"
          "total,,,1\n");
    const auto parsed = nlohmann::json::parse(report_to_json(inst, rep));
    CHECK(parsed["plan"] == nlohmann::json::array({4}));
    CHECK(parsed["objective"].get<double>() == doctest::Approx(1.0));
    CHECK(parsed["pairs"].size() == 20);
}
