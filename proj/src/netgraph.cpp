#include "afslab/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace afslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLenEps = 1e-9;

}  // namespace

Network Network::build(std::vector<NodeId> nodes, const std::vector<Link>& links,
                       bool symmetric) {
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
        throw ParseError(ParseError::Kind::BadHeader, "node ids are not unique");
    if (nodes.empty())
        throw ParseError(ParseError::Kind::BadHeader, "network has no nodes");

    Network net;
    net.nodes_ = std::move(nodes);
    net.symmetric_ = symmetric;
    const std::size_t n = net.nodes_.size();
    net.adj_.resize(n);
    net.radj_.resize(n);

    auto idx = [&](NodeId id) {
        auto it = std::lower_bound(net.nodes_.begin(), net.nodes_.end(), id);
        if (it == net.nodes_.end() || *it != id)
            throw ParseError(ParseError::Kind::UnknownNode,
                             "unknown node id " + std::to_string(id));
        return static_cast<int>(it - net.nodes_.begin());
    };

    std::set<std::pair<int, int>> seen;
    auto add = [&](int a, int b, double d) {
        if (!seen.insert({a, b}).second)
            throw ParseError(ParseError::Kind::DuplicateLink,
                             "duplicate link " + std::to_string(net.nodes_[a]) + " -> " +
                                 std::to_string(net.nodes_[b]));
        net.adj_[a].push_back({b, d});
        net.radj_[b].push_back({a, d});
        ++net.link_count_;
    };

    for (const Link& l : links) {
        if (l.from == l.to)
            throw ParseError(ParseError::Kind::SelfLoop,
                             "self-loop at node " + std::to_string(l.from));
        if (!(l.distance > 0.0))
            throw ParseError(ParseError::Kind::NonpositiveDistance,
                             "nonpositive distance on link " + std::to_string(l.from) +
                                 " -> " + std::to_string(l.to));
        const int a = idx(l.from), b = idx(l.to);
        add(a, b, l.distance);
        if (symmetric) add(b, a, l.distance);
    }

    for (auto& row : net.adj_) std::sort(row.begin(), row.end());
    for (auto& row : net.radj_) std::sort(row.begin(), row.end());

    // weak connectivity
    std::vector<char> reach(n, 0);
    std::vector<int> stack{0};
    reach[0] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (auto [v, d] : net.adj_[u])
            if (!reach[v]) reach[v] = 1, stack.push_back(v);
        for (auto [v, d] : net.radj_[u])
            if (!reach[v]) reach[v] = 1, stack.push_back(v);
    }
    if (std::count(reach.begin(), reach.end(), 1) != static_cast<long>(n))
        throw ParseError(ParseError::Kind::Disconnected, "graph is not connected");
    return net;
}

bool Network::has_node(NodeId id) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), id);
}

int Network::index_of(NodeId id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id)
        throw ValidationError("node " + std::to_string(id) + " is not in the network");
    return static_cast<int>(it - nodes_.begin());
}

bool Network::has_link(NodeId i, NodeId j) const {
    if (!has_node(i) || !has_node(j)) return false;
    const auto& row = adj_[static_cast<std::size_t>(index_of(i))];
    const int jx = index_of(j);
    return std::any_of(row.begin(), row.end(), [&](auto& e) { return e.first == jx; });
}

double Network::link_distance(NodeId i, NodeId j) const {
    const auto& row = adj_[static_cast<std::size_t>(index_of(i))];
    const int jx = index_of(j);
    for (auto [v, d] : row)
        if (v == jx) return d;
    throw ValidationError("no link " + std::to_string(i) + " -> " + std::to_string(j));
}

double Network::max_link_distance() const {
    double m = 0.0;
    for (const auto& row : adj_)
        for (auto [v, d] : row) m = std::max(m, d);
    return m;
}

bool Network::has_symmetric_distances() const {
    for (std::size_t u = 0; u < adj_.size(); ++u) {
        for (auto [v, d] : adj_[u]) {
            const auto& back = adj_[static_cast<std::size_t>(v)];
            bool ok = false;
            for (auto [w, dd] : back)
                if (w == static_cast<int>(u) && std::abs(dd - d) <= kLenEps) ok = true;
            if (!ok) return false;
        }
    }
    return true;
}

namespace {

struct HeaderFields {
    std::size_t nodes = 0, links = 0;
    bool symmetric = false;
};

HeaderFields parse_header(const std::string& line) {
    HeaderFields h;
    std::istringstream in(line);
    std::string tok;
    int got = 0;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ParseError(ParseError::Kind::BadHeader, "bad header token: " + tok);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        try {
            if (key == "nodes")
                h.nodes = std::stoul(val), ++got;
            else if (key == "links")
                h.links = std::stoul(val), ++got;
            else if (key == "symmetric")
                h.symmetric = std::stoi(val) != 0, ++got;
            else
                throw ParseError(ParseError::Kind::BadHeader, "unknown header key: " + key);
        } catch (const std::invalid_argument&) {
            throw ParseError(ParseError::Kind::BadHeader, "bad header value: " + tok);
        }
    }
    if (got != 3)
        throw ParseError(ParseError::Kind::BadHeader,
                         "header must be 'nodes=<n> links=<m> symmetric=<0|1>'");
    return h;
}

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

Network load_network(std::istream& in) {
    std::string line;
    std::optional<HeaderFields> header;
    std::vector<Link> links;
    while (std::getline(in, line)) {
        line = strip_comment(line);
        if (blank(line)) continue;
        if (!header) {
            header = parse_header(line);
            continue;
        }
        std::istringstream row(line);
        Link l;
        if (!(row >> l.from >> l.to >> l.distance))
            throw ParseError(ParseError::Kind::BadRow, "bad link row: " + line);
        std::string rest;
        if (row >> rest)
            throw ParseError(ParseError::Kind::BadRow, "trailing tokens in row: " + line);
        links.push_back(l);
    }
    if (!header) throw ParseError(ParseError::Kind::BadHeader, "missing header");
    if (links.size() != header->links)
        throw ParseError(ParseError::Kind::LinkCountMismatch,
                         "header declares " + std::to_string(header->links) +
                             " links, file has " + std::to_string(links.size()));
    std::vector<NodeId> nodes(header->nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<NodeId>(i + 1);
    for (const Link& l : links) {
        if (l.from < 1 || l.from > static_cast<NodeId>(header->nodes) || l.to < 1 ||
            l.to > static_cast<NodeId>(header->nodes))
            throw ParseError(ParseError::Kind::UnknownNode,
                             "link row references undeclared node");
    }
    return Network::build(std::move(nodes), links, header->symmetric);
}

Network load_network(const std::string& text) {
    std::istringstream in(text);
    return load_network(in);
}

Network load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(ParseError::Kind::BadFormat, "cannot open " + path);
    return load_network(in);
}

OneWayPath OneWayPath::over(const Network& net, std::vector<NodeId> nodes) {
    if (nodes.size() < 2) throw ValidationError("path needs at least two nodes");
    std::set<NodeId> uniq(nodes.begin(), nodes.end());
    if (uniq.size() != nodes.size()) throw ValidationError("path repeats a node");
    OneWayPath p;
    p.prefix.resize(nodes.size());
    p.prefix[0] = 0.0;
    for (std::size_t t = 0; t + 1 < nodes.size(); ++t)
        p.prefix[t + 1] = p.prefix[t] + net.link_distance(nodes[t], nodes[t + 1]);
    p.nodes = std::move(nodes);
    return p;
}

bool operator==(const OneWayPath& a, const OneWayPath& b) {
    return a.nodes == b.nodes && a.prefix == b.prefix;
}

bool RoundTripPath::contains(NodeId id) const {
    return std::find(outbound.nodes.begin(), outbound.nodes.end(), id) !=
           outbound.nodes.end();
}

RoundTripPath RoundTripPath::mirror(const Network& net, OneWayPath ob) {
    for (std::size_t t = 0; t + 1 < ob.nodes.size(); ++t) {
        const double fwd = net.link_distance(ob.nodes[t], ob.nodes[t + 1]);
        if (!net.has_link(ob.nodes[t + 1], ob.nodes[t]) ||
            std::abs(net.link_distance(ob.nodes[t + 1], ob.nodes[t]) - fwd) > 1e-9)
            throw ValidationError("round trip requires symmetric link distances");
    }
    RoundTripPath rt;
    rt.visits = ob.nodes;
    for (std::size_t t = ob.nodes.size() - 1; t-- > 0;) rt.visits.push_back(ob.nodes[t]);
    rt.prefix.resize(rt.visits.size());
    rt.prefix[0] = 0.0;
    for (std::size_t t = 0; t + 1 < rt.visits.size(); ++t)
        rt.prefix[t + 1] = rt.prefix[t] + net.link_distance(rt.visits[t], rt.visits[t + 1]);
    rt.outbound = std::move(ob);
    return rt;
}

bool operator==(const RoundTripPath& a, const RoundTripPath& b) {
    return a.outbound == b.outbound && a.visits == b.visits && a.prefix == b.prefix;
}

const std::vector<RoundTripPath>& PathCatalog::paths(NodeId r, NodeId s) const {
    auto it = entries.find({r, s});
    if (it == entries.end())
        throw ValidationError("catalog has no entry for pair (" + std::to_string(r) +
                              ", " + std::to_string(s) + ")");
    return it->second;
}

bool operator==(const PathCatalog& a, const PathCatalog& b) {
    return a.k == b.k && a.tau == b.tau && a.entries == b.entries;
}

namespace {

// Shortest-path machinery shared by shortest_path and the spur searches of
// the k-shortest enumeration. `spur` is the path start; directed edges
// (spur -> y) listed in banned_first are unusable, nodes with banned[x]==1
// are removed, and no path may pass through spur again.
struct SpurQuery {
    int spur;
    int target;
    const std::vector<char>* banned_node;        // may be null
    const std::vector<char>* banned_first_edge;  // indexed by node index, may be null
};

std::vector<double> dist_to_target(const Network& net, const SpurQuery& q) {
    const std::size_t n = net.node_count();
    std::vector<double> dist(n, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[static_cast<std::size_t>(q.target)] = 0.0;
    heap.push({0.0, q.target});
    auto node_banned = [&](int x) { return q.banned_node && (*q.banned_node)[x]; };
    while (!heap.empty()) {
        auto [d, x] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(x)]) continue;
        if (x == q.spur) continue;  // nothing routes through the start
        for (auto [w, len] : net.in(x)) {
            if (node_banned(w)) continue;
            if (w == q.spur && q.banned_first_edge && (*q.banned_first_edge)[x]) continue;
            const double nd = d + len;
            if (nd < dist[static_cast<std::size_t>(w)]) {
                dist[static_cast<std::size_t>(w)] = nd;
                heap.push({nd, w});
            }
        }
    }
    return dist;
}

// Walks the lexicographically smallest shortest path from spur to target
// given the dist-to-target table. Returns node indices.
std::optional<std::vector<int>> lex_walk(const Network& net, const SpurQuery& q,
                                         const std::vector<double>& dist) {
    if (!std::isfinite(dist[static_cast<std::size_t>(q.spur)])) return std::nullopt;
    std::vector<int> seq{q.spur};
    int cur = q.spur;
    while (cur != q.target) {
        int next = -1;
        for (auto [y, len] : net.out(cur)) {
            if (y == q.spur) continue;
            if (q.banned_node && (*q.banned_node)[y]) continue;
            if (cur == q.spur && q.banned_first_edge && (*q.banned_first_edge)[y]) continue;
            if (std::abs(dist[static_cast<std::size_t>(cur)] -
                         (len + dist[static_cast<std::size_t>(y)])) <= kLenEps) {
                next = y;
                break;
            }
        }
        if (next < 0) return std::nullopt;  // unreachable with positive weights
        seq.push_back(next);
        cur = next;
    }
    return seq;
}

std::optional<std::vector<NodeId>> spur_shortest(const Network& net, const SpurQuery& q) {
    const auto dist = dist_to_target(net, q);
    auto walk = lex_walk(net, q, dist);
    if (!walk) return std::nullopt;
    std::vector<NodeId> ids(walk->size());
    std::transform(walk->begin(), walk->end(), ids.begin(),
                   [&](int ix) { return net.node_at(ix); });
    return ids;
}

struct PathOrder {
    bool operator()(const OneWayPath& a, const OneWayPath& b) const {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.nodes < b.nodes;
    }
};

}  // namespace

OneWayPath shortest_path(const Network& net, NodeId r, NodeId s) {
    if (r == s) throw ValidationError("origin equals destination");
    SpurQuery q{net.index_of(r), net.index_of(s), nullptr, nullptr};
    auto seq = spur_shortest(net, q);
    if (!seq)
        throw ValidationError("node " + std::to_string(s) + " is unreachable from " +
                              std::to_string(r));
    return OneWayPath::over(net, std::move(*seq));
}

std::vector<OneWayPath> k_shortest_paths(const Network& net, NodeId r, NodeId s, int k,
                                         std::optional<double> tau) {
    if (k < 1) throw ValidationError("k must be at least 1");
    std::vector<OneWayPath> selected{shortest_path(net, r, s)};
    const double cap =
        tau ? (1.0 + *tau) * selected[0].length() + kLenEps : kInf;

    const int target = net.index_of(s);
    std::set<OneWayPath, PathOrder> candidates;
    std::set<std::vector<NodeId>> known{selected[0].nodes};

    while (static_cast<int>(selected.size()) < k) {
        const OneWayPath& prev = selected.back();
        for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
            const int spur = net.index_of(prev.nodes[i]);
            std::vector<char> banned_node(net.node_count(), 0);
            for (std::size_t t = 0; t < i; ++t)
                banned_node[static_cast<std::size_t>(net.index_of(prev.nodes[t]))] = 1;
            std::vector<char> banned_first(net.node_count(), 0);
            for (const OneWayPath& p : selected) {
                if (p.nodes.size() > i + 1 &&
                    std::equal(prev.nodes.begin(), prev.nodes.begin() + i + 1, p.nodes.begin()))
                    banned_first[static_cast<std::size_t>(net.index_of(p.nodes[i + 1]))] = 1;
            }
            SpurQuery q{spur, target, &banned_node, &banned_first};
            auto tail = spur_shortest(net, q);
            if (!tail) continue;
            std::vector<NodeId> full(prev.nodes.begin(), prev.nodes.begin() + i);
            full.insert(full.end(), tail->begin(), tail->end());
            if (!known.insert(full).second) continue;
            candidates.insert(OneWayPath::over(net, std::move(full)));
        }
        if (candidates.empty()) break;
        OneWayPath next = *candidates.begin();
        candidates.erase(candidates.begin());
        if (next.length() > cap) break;  // everything later is longer still
        selected.push_back(std::move(next));
    }
    if (tau) {
        std::erase_if(selected, [&](const OneWayPath& p) { return p.length() > cap; });
    }
    return selected;
}

PathCatalog build_catalog(const Network& net, int k, std::optional<double> tau) {
    if (!net.has_symmetric_distances())
        throw ValidationError(
            "catalog requires every link to have a reverse twin of equal distance");
    PathCatalog cat;
    cat.k = k;
    cat.tau = tau;
    for (NodeId r : net.nodes()) {
        for (NodeId s : net.nodes()) {
            if (r == s) continue;
            auto ways = k_shortest_paths(net, r, s, k, tau);
            std::vector<RoundTripPath> trips;
            trips.reserve(ways.size());
            for (auto& w : ways) trips.push_back(RoundTripPath::mirror(net, std::move(w)));
            cat.entries.emplace(std::make_pair(r, s), std::move(trips));
        }
    }
    return cat;
}

std::string serialize_catalog(const PathCatalog& catalog) {
    nlohmann::json root;
    root["schema"] = "afslab-catalog/1";
    root["k"] = catalog.k;
    if (catalog.tau)
        root["tau"] = *catalog.tau;
    else
        root["tau"] = nullptr;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, trips] : catalog.entries) {
        nlohmann::json e;
        e["from"] = key.first;
        e["to"] = key.second;
        nlohmann::json paths = nlohmann::json::array();
        for (const RoundTripPath& t : trips) {
            nlohmann::json p;
            p["nodes"] = t.outbound.nodes;
            p["one_way_length"] = t.outbound.length();
            paths.push_back(std::move(p));
        }
        e["paths"] = std::move(paths);
        entries.push_back(std::move(e));
    }
    root["entries"] = std::move(entries);
    return root.dump(2) + "\n";
}

PathCatalog parse_catalog(const std::string& text, const Network& net) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(ParseError::Kind::BadFormat, std::string("bad catalog json: ") + e.what());
    }
    if (!root.contains("schema") || root["schema"] != "afslab-catalog/1")
        throw ParseError(ParseError::Kind::BadFormat, "unsupported catalog schema");
    PathCatalog cat;
    cat.k = root.at("k").get<int>();
    if (!root.at("tau").is_null()) cat.tau = root["tau"].get<double>();
    for (const auto& e : root.at("entries")) {
        const NodeId r = e.at("from").get<NodeId>();
        const NodeId s = e.at("to").get<NodeId>();
        std::vector<RoundTripPath> trips;
        for (const auto& p : e.at("paths")) {
            auto nodes = p.at("nodes").get<std::vector<NodeId>>();
            auto way = OneWayPath::over(net, std::move(nodes));
            const double stored = p.at("one_way_length").get<double>();
            if (std::abs(stored - way.length()) > 1e-9)
                throw ParseError(ParseError::Kind::BadFormat,
                                 "catalog length disagrees with the network");
            trips.push_back(RoundTripPath::mirror(net, std::move(way)));
        }
        cat.entries.emplace(std::make_pair(r, s), std::move(trips));
    }
    return cat;
}

}  // namespace afslab
