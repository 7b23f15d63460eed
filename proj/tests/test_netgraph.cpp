#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "afslab/dataset.hpp"
#include "afslab/netgraph.hpp"
#include "testutil.hpp"

using namespace afslab;

namespace {

Network line3() {
    return load_network("nodes=3 links=2 symmetric=1\n1 2 5\n2 3 7\n");
}

Network triangle() {
    return load_network("nodes=3 links=3 symmetric=1\n1 2 4\n2 3 4\n1 3 9\n");
}

// 3x3 unit grid, nodes numbered row-major 1..9.
Network grid3() {
    std::ostringstream s;
    s << "nodes=9 links=12 symmetric=1\n";
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 3; ++col) {
            const int id = row * 3 + col + 1;
            if (col < 2) s << id << ' ' << id + 1 << " 1\n";
            if (row < 2) s << id << ' ' << id + 3 << " 1\n";
        }
    return load_network(s.str());
}

}  // namespace

TEST_CASE("load_network accepts a minimal symmetric file") {
    const Network net = line3();
    CHECK(net.node_count() == 3);
    CHECK(net.link_count() == 4);  // symmetric closure of 2 rows
    CHECK(net.symmetric());
    CHECK(net.has_link(1, 2));
    CHECK(net.has_link(2, 1));
    CHECK(net.link_distance(2, 3) == 7.0);
    CHECK(net.max_link_distance() == 7.0);
    CHECK(net.has_symmetric_distances());
}

TEST_CASE("load_network rejects malformed input with distinct error kinds") {
    auto kind_of = [](const std::string& text) {
        try {
            load_network(text);
        } catch (const ParseError& e) {
            return e.kind;
        }
        FAIL("expected a parse error");
        return ParseError::Kind::BadFormat;
    };
    CHECK(kind_of("nodes=3 links=1 symmetric=0\n1 2 5\n2 3 7\n") ==
          ParseError::Kind::LinkCountMismatch);
    CHECK(kind_of("nodes=3\n1 2 5\n") == ParseError::Kind::BadHeader);
    CHECK(kind_of("nodes=2 links=1 symmetric=0\n1 two 5\n") == ParseError::Kind::BadRow);
    CHECK(kind_of("nodes=2 links=1 symmetric=0\n1 3 5\n") == ParseError::Kind::UnknownNode);
    CHECK(kind_of("nodes=2 links=2 symmetric=0\n1 2 5\n1 1 3\n") == ParseError::Kind::SelfLoop);
    CHECK(kind_of("nodes=2 links=2 symmetric=0\n1 2 5\n1 2 5\n") ==
          ParseError::Kind::DuplicateLink);
    CHECK(kind_of("nodes=2 links=1 symmetric=0\n1 2 0\n") ==
          ParseError::Kind::NonpositiveDistance);
    // declared node 3 touches no link
    CHECK(kind_of("nodes=3 links=1 symmetric=1\n1 2 5\n") == ParseError::Kind::Disconnected);
}

TEST_CASE("comments and blank lines are ignored") {
    const Network net = load_network(
        "# header comment\n\nnodes=2 links=1 symmetric=1\n1 2 5 # inline\n\n");
    CHECK(net.node_count() == 2);
    CHECK(net.link_count() == 2);
}

TEST_CASE("embedded Sioux Falls file loads with 24 nodes and 76 links") {
    const Network& net = sioux_falls_network();
    CHECK(net.node_count() == 24);
    CHECK(net.link_count() == 76);
    CHECK(net.has_symmetric_distances());
    CHECK(sioux_falls_probabilities().size() == 24);
    CHECK(sioux_falls_probabilities().at(15) == doctest::Approx(0.5431).epsilon(1e-12));
}

TEST_CASE("shortest_path on forced examples") {
    SUBCASE("line graph") {
        const auto p = shortest_path(line3(), 1, 3);
        CHECK(p.nodes == std::vector<NodeId>{1, 2, 3});
        CHECK(p.length() == 12.0);
        CHECK(p.prefix == std::vector<double>{0.0, 5.0, 12.0});
    }
    SUBCASE("triangle prefers the two-hop route") {
        const auto p = shortest_path(triangle(), 1, 3);
        CHECK(p.nodes == std::vector<NodeId>{1, 2, 3});
        CHECK(p.length() == 8.0);
    }
    SUBCASE("origin equals destination is rejected") {
        CHECK_THROWS_AS(shortest_path(line3(), 2, 2), ValidationError);
    }
}

TEST_CASE("shortest_path matches an all-pairs oracle on Sioux Falls") {
    const Network& net = sioux_falls_network();
    const auto oracle = testutil::all_pairs_distances(net);
    for (NodeId r : net.nodes())
        for (NodeId s : net.nodes()) {
            if (r == s) continue;
            const auto p = shortest_path(net, r, s);
            CHECK(p.length() == doctest::Approx(oracle.at({r, s})).epsilon(1e-12));
        }
    // frozen spot value for the (1, 20) pair
    const auto p = shortest_path(net, 1, 20);
    CHECK(p.length() == 22.0);
    CHECK(p.nodes == std::vector<NodeId>{1, 2, 6, 8, 7, 18, 20});
}

TEST_CASE("shortest_path breaks length ties lexicographically") {
    // two parallel two-hop routes 1-2-4 and 1-3-4 of equal length
    const Network net =
        load_network("nodes=4 links=4 symmetric=1\n1 2 2\n1 3 2\n2 4 2\n3 4 2\n");
    const auto p = shortest_path(net, 1, 4);
    CHECK(p.nodes == std::vector<NodeId>{1, 2, 4});
}

TEST_CASE("k_shortest_paths enumerates the triangle exactly") {
    const Network net = triangle();
    const auto two = k_shortest_paths(net, 1, 3, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].nodes == std::vector<NodeId>{1, 2, 3});
    CHECK(two[0].length() == 8.0);
    CHECK(two[1].nodes == std::vector<NodeId>{1, 3});
    CHECK(two[1].length() == 9.0);
    // asking for more than exist returns what exists
    CHECK(k_shortest_paths(net, 1, 3, 10).size() == 2);
}

TEST_CASE("k_shortest_paths with K=1 is exactly shortest_path") {
    const Network& net = sioux_falls_network();
    for (NodeId s : {7, 13, 20, 24}) {
        const auto one = k_shortest_paths(net, 1, s, 1);
        REQUIRE(one.size() == 1);
        CHECK(one[0] == shortest_path(net, 1, s));
    }
}

TEST_CASE("grid corner-to-corner: first three paths all have length 4") {
    const Network net = grid3();
    const auto oracle = testutil::all_simple_paths(net, 1, 9);
    REQUIRE(oracle.size() >= 3);
    const auto three = k_shortest_paths(net, 1, 9, 3);
    REQUIRE(three.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(three[static_cast<std::size_t>(i)].length() == 4.0);
        CHECK(three[static_cast<std::size_t>(i)] == oracle[static_cast<std::size_t>(i)]);
    }
    CHECK(three[0].nodes == std::vector<NodeId>{1, 2, 3, 6, 9});
    CHECK(three[1].nodes == std::vector<NodeId>{1, 2, 5, 6, 9});
    CHECK(three[2].nodes == std::vector<NodeId>{1, 2, 5, 8, 9});
}

TEST_CASE("unbounded k-shortest equals exhaustive enumeration on small graphs") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);  // 4..8 nodes
        const Network net = testutil::random_network(rng, n, 4);
        for (NodeId r : net.nodes())
            for (NodeId s : net.nodes()) {
                if (r == s) continue;
                const auto oracle = testutil::all_simple_paths(net, r, s);
                const auto mine =
                    k_shortest_paths(net, r, s, static_cast<int>(oracle.size()) + 5);
                REQUIRE(mine.size() == oracle.size());
                for (std::size_t i = 0; i < mine.size(); ++i) CHECK(mine[i] == oracle[i]);
            }
    }
}

TEST_CASE("deviation tolerance filters long paths") {
    const Network net = triangle();
    // shortest is 8; (1+0.1)*8 = 8.8 < 9 so the direct link is filtered
    const auto tight = k_shortest_paths(net, 1, 3, 5, 0.1);
    REQUIRE(tight.size() == 1);
    CHECK(tight[0].length() == 8.0);
    const auto loose = k_shortest_paths(net, 1, 3, 5, 0.2);
    CHECK(loose.size() == 2);
}

TEST_CASE("round trips mirror the outbound leg") {
    const Network net = line3();
    const auto rt = RoundTripPath::mirror(net, shortest_path(net, 1, 3));
    CHECK(rt.visits == std::vector<NodeId>{1, 2, 3, 2, 1});
    CHECK(rt.total_length() == 24.0);
    CHECK(rt.midpoint() == 2);
    CHECK(rt.visits[rt.midpoint()] == 3);
    CHECK(rt.prefix == std::vector<double>{0.0, 5.0, 12.0, 19.0, 24.0});
    CHECK(rt.contains(2));
    CHECK(!rt.contains(4));
}

TEST_CASE("mirror refuses asymmetric links") {
    const Network net = load_network("nodes=2 links=2 symmetric=0\n1 2 5\n2 1 6\n");
    CHECK_THROWS_AS(RoundTripPath::mirror(net, shortest_path(net, 1, 2)), ValidationError);
}

TEST_CASE("mirror property holds across a whole catalog") {
    const PathCatalog cat = build_catalog(sioux_falls_network(), 3);
    CHECK(cat.entries.size() == 552);  // 24 * 23 ordered pairs
    for (const auto& [key, trips] : cat.entries) {
        REQUIRE(!trips.empty());
        CHECK(trips.size() <= 3);
        for (std::size_t k = 0; k < trips.size(); ++k) {
            const auto& t = trips[k];
            CHECK(t.prefix.back() ==
                  doctest::Approx(2.0 * t.prefix[t.midpoint()]).epsilon(1e-12));
            CHECK(t.visits.front() == key.first);
            CHECK(t.visits[t.midpoint()] == key.second);
            if (k > 0) CHECK(trips[k - 1].outbound.length() <= t.outbound.length());
        }
        // first entry is a shortest path
        CHECK(trips[0].outbound.length() ==
              doctest::Approx(shortest_path(sioux_falls_network(), key.first, key.second)
                                  .length()));
    }
}

TEST_CASE("3-node line catalog has six single-path entries") {
    const PathCatalog cat = build_catalog(line3(), 3);
    CHECK(cat.entries.size() == 6);
    for (const auto& [key, trips] : cat.entries) CHECK(trips.size() == 1);
}

TEST_CASE("catalog serialization round-trips bit-exactly") {
    const Network& net = sioux_falls_network();
    const PathCatalog cat = build_catalog(net, 2, 0.5);
    const std::string text = serialize_catalog(cat);
    const PathCatalog back = parse_catalog(text, net);
    CHECK(back == cat);
    CHECK(serialize_catalog(back) == text);
}

TEST_CASE("catalog building is deterministic") {
    const Network& net = sioux_falls_network();
    CHECK(serialize_catalog(build_catalog(net, 3)) == serialize_catalog(build_catalog(net, 3)));
}

TEST_CASE("catalog building requires symmetric distances") {
    const Network net = load_network("nodes=2 links=2 symmetric=0\n1 2 5\n2 1 6\n");
    CHECK_THROWS_AS(build_catalog(net, 1), ValidationError);
}

TEST_CASE("parse_catalog validates schema and stored lengths") {
    const Network net = line3();
    CHECK_THROWS_AS(parse_catalog("{}", net), ParseError);
    CHECK_THROWS_AS(parse_catalog("not json", net), ParseError);
    std::string text = serialize_catalog(build_catalog(net, 1));
    const auto pos = text.find("\"one_way_length\": 5.0");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 21, "\"one_way_length\": 4.0");
    CHECK_THROWS_AS(parse_catalog(text, net), ParseError);
}

TEST_CASE("paths lookup rejects unknown pairs") {
    const PathCatalog cat = build_catalog(line3(), 1);
    CHECK(cat.paths(1, 3).size() == 1);
    CHECK_THROWS_AS(cat.paths(1, 1), ValidationError);
}

TEST_CASE("one-way paths reject broken or looping sequences") {
    const Network net = line3();
    CHECK_THROWS_AS(OneWayPath::over(net, {1, 3}), ValidationError);
    CHECK_THROWS_AS(OneWayPath::over(net, {1, 2, 1}), ValidationError);
    CHECK_THROWS_AS(OneWayPath::over(net, {1}), ValidationError);
}
