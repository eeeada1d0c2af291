#ifndef CAUSALPROBE_CIRCUIT_EXPORT_HPP
#define CAUSALPROBE_CIRCUIT_EXPORT_HPP

#include <string>

#include "causalprobe/circuit.hpp"

namespace causalprobe {

// Graphviz DOT. Fill encodes the signed effect magnitude: blue scale for
// positive scores, red scale for negative, darker = larger magnitude.
// Provenance is structural: set-search nodes are boxes, preempted nodes
// double octagons, local-expansion nodes dashed.
std::string export_circuit_dot(const Circuit& circuit);

// Canonical JSON; export -> parse -> export is byte-identical.
std::string export_circuit_json(const Circuit& circuit);
Circuit parse_circuit_json(const std::string& text);

// Node and edge tables for spreadsheets.
std::string circuit_nodes_csv(const Circuit& circuit);
std::string circuit_edges_csv(const Circuit& circuit);

}  // namespace causalprobe

#endif
