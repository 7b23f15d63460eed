#pragma once

#include <map>
#include <string>

#include "afslab/netgraph.hpp"

namespace afslab {

/// Embedded copy of the Sioux Falls benchmark: 24 nodes, 76 directed links
/// with LeBlanc distances, plus per-node demand probabilities. The same
/// content ships as plain files under data/ for reference.
const std::string& sioux_falls_network_text();
const std::string& sioux_falls_probability_text();

const Network& sioux_falls_network();
const std::map<NodeId, double>& sioux_falls_probabilities();

/// Parses `node_id,probability` CSV (optional header row, `#` comments).
std::map<NodeId, double> parse_probability_csv(const std::string& text);

}  // namespace afslab
