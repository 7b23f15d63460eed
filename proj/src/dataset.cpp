#include "afslab/dataset.hpp"

#include <sstream>

namespace afslab {

namespace {

// LeBlanc benchmark distances for the 24-node Sioux Falls road network,
// one directed row per link.
const char kNetworkText[] = R"net(# Sioux Falls road network (LeBlanc benchmark distances, miles)
nodes=24 links=76 symmetric=0
1 2 6
1 3 4
2 1 6
2 6 5
3 1 4
3 4 4
3 12 4
4 3 4
4 5 2
4 11 6
5 4 2
5 6 4
5 9 5
6 2 5
6 5 4
6 8 2
7 8 3
7 18 2
8 6 2
8 7 3
8 9 10
8 16 5
9 5 5
9 8 10
9 10 3
10 9 3
10 11 5
10 15 6
10 16 4
10 17 8
11 4 6
11 10 5
11 12 6
11 14 4
12 3 4
12 11 6
12 13 3
13 12 3
13 24 4
14 11 4
14 15 5
14 23 4
15 10 6
15 14 5
15 19 3
15 22 3
16 8 5
16 10 4
16 17 2
16 18 3
17 10 8
17 16 2
17 19 2
18 7 2
18 16 3
18 20 4
19 15 3
19 17 2
19 20 4
20 18 4
20 19 4
20 21 6
20 22 5
21 20 6
21 22 2
21 24 3
22 15 3
22 20 5
22 21 2
22 23 4
23 14 4
23 22 4
23 24 2
24 13 4
24 21 3
24 23 2
)net";

// Per-node probability of being a demand node.
const char kProbabilityText[] = R"csv(node_id,probability
1,0.7689
2,0.1673
3,0.8620
4,0.9899
5,0.5144
6,0.8843
7,0.5880
8,0.1548
9,0.1999
10,0.4070
11,0.7487
12,0.8256
13,0.7900
14,0.3185
15,0.5431
16,0.0900
17,0.1117
18,0.1363
19,0.6787
20,0.4952
21,0.1897
22,0.4950
23,0.1476
24,0.0550
)csv";

}  // namespace

const std::string& sioux_falls_network_text() {
    static const std::string text(kNetworkText);
    return text;
}

const std::string& sioux_falls_probability_text() {
    static const std::string text(kProbabilityText);
    return text;
}

const Network& sioux_falls_network() {
    static const Network net = load_network(sioux_falls_network_text());
    return net;
}

const std::map<NodeId, double>& sioux_falls_probabilities() {
    static const std::map<NodeId, double> probs =
        parse_probability_csv(sioux_falls_probability_text());
    return probs;
}

std::map<NodeId, double> parse_probability_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::map<NodeId, double> probs;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("node_id", 0) == 0) continue;  // optional header row
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError(ParseError::Kind::BadRow, "probability row needs 'node,p': " + line);
        try {
            const NodeId node = std::stoi(line.substr(0, comma));
            const double p = std::stod(line.substr(comma + 1));
            if (p < 0.0 || p > 1.0)
                throw ParseError(ParseError::Kind::BadRow,
                                 "probability outside [0,1]: " + line);
            if (!probs.emplace(node, p).second)
                throw ParseError(ParseError::Kind::DuplicateLink,
                                 "node listed twice: " + line);
        } catch (const std::invalid_argument&) {
            throw ParseError(ParseError::Kind::BadRow, "bad probability row: " + line);
        }
    }
    if (probs.empty()) throw ParseError(ParseError::Kind::BadFormat, "no probability rows");
    return probs;
}

}  // namespace afslab
