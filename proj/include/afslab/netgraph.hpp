#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "afslab/common.hpp"

namespace afslab {

struct Link {
    NodeId from = 0;
    NodeId to = 0;
    double distance = 0.0;
};

/// Weighted road network. Links are stored directed; a symmetric network
/// lists one row per undirected link and gets its closure at build time.
/// Immutable after construction.
class Network {
public:
    Network() = default;

    /// Validates: unique node ids, no self-loops, strictly positive
    /// distances, no duplicate directed links, weak connectivity.
    static Network build(std::vector<NodeId> nodes, const std::vector<Link>& links,
                         bool symmetric);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t link_count() const { return link_count_; }
    const std::vector<NodeId>& nodes() const { return nodes_; }
    bool symmetric() const { return symmetric_; }

    bool has_node(NodeId id) const;
    int index_of(NodeId id) const;  // throws ValidationError on unknown id
    NodeId node_at(int idx) const { return nodes_[static_cast<std::size_t>(idx)]; }

    /// Outgoing links of a node, as (target index, distance), sorted by
    /// target node id.
    const std::vector<std::pair<int, double>>& out(int idx) const {
        return adj_[static_cast<std::size_t>(idx)];
    }
    /// Incoming links, same layout.
    const std::vector<std::pair<int, double>>& in(int idx) const {
        return radj_[static_cast<std::size_t>(idx)];
    }

    bool has_link(NodeId i, NodeId j) const;
    double link_distance(NodeId i, NodeId j) const;  // throws if absent
    double max_link_distance() const;

    /// True when every directed link has a reverse twin of equal distance
    /// (within 1e-9). Round-trip catalogs require this.
    bool has_symmetric_distances() const;

private:
    std::vector<NodeId> nodes_;  // sorted, unique
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<std::vector<std::pair<int, double>>> radj_;
    std::size_t link_count_ = 0;
    bool symmetric_ = false;
};

/// Parses the plain-text link list format:
///   nodes=<n> links=<m> symmetric=<0|1>
///   i j distance
/// `#` starts a comment; node ids are 1..n; m counts data rows.
Network load_network(std::istream& in);
Network load_network(const std::string& text);
Network load_network_file(const std::string& path);

/// Loopless directed path from r to s with cumulative prefix distances.
struct OneWayPath {
    std::vector<NodeId> nodes;
    std::vector<double> prefix;  // prefix[0] == 0, running sum of link distances

    double length() const { return prefix.back(); }
    NodeId origin() const { return nodes.front(); }
    NodeId destination() const { return nodes.back(); }

    /// Canonical constructor: recomputes prefixes left to right and checks
    /// that consecutive nodes are linked and no node repeats.
    static OneWayPath over(const Network& net, std::vector<NodeId> nodes);
};

bool operator==(const OneWayPath& a, const OneWayPath& b);

/// Round trip r -> s -> r over the same node sequence. The destination
/// appears exactly once, at the midpoint of the visit list.
struct RoundTripPath {
    OneWayPath outbound;
    std::vector<NodeId> visits;  // r .. s .. r
    std::vector<double> prefix;  // over the full round trip

    double total_length() const { return prefix.back(); }
    std::size_t midpoint() const { return outbound.nodes.size() - 1; }
    bool contains(NodeId id) const;

    /// Mirror expansion. Requires the reverse of every outbound link to
    /// exist with equal distance (within 1e-9).
    static RoundTripPath mirror(const Network& net, OneWayPath outbound);
};

bool operator==(const RoundTripPath& a, const RoundTripPath& b);

/// Deviation-path catalog: for every ordered O-D pair, up to k round-trip
/// paths sorted by one-way length (ties by node sequence).
struct PathCatalog {
    int k = 1;
    std::optional<double> tau;  // optional deviation tolerance
    std::map<std::pair<NodeId, NodeId>, std::vector<RoundTripPath>> entries;

    const std::vector<RoundTripPath>& paths(NodeId r, NodeId s) const;
};

bool operator==(const PathCatalog& a, const PathCatalog& b);

/// Minimum-length loopless path; among equal-length paths returns the
/// lexicographically smallest node sequence. Throws ValidationError when s
/// is unreachable from r.
OneWayPath shortest_path(const Network& net, NodeId r, NodeId s);

/// Up to k shortest loopless paths in nondecreasing length order, ties
/// broken lexicographically; with tau set, only paths within
/// (1+tau) * shortest length are returned.
std::vector<OneWayPath> k_shortest_paths(const Network& net, NodeId r, NodeId s,
                                         int k, std::optional<double> tau = {});

/// Catalog over all ordered pairs r != s. Requires symmetric distances.
PathCatalog build_catalog(const Network& net, int k, std::optional<double> tau = {});

std::string serialize_catalog(const PathCatalog& catalog);
PathCatalog parse_catalog(const std::string& text, const Network& net);

}  // namespace afslab
