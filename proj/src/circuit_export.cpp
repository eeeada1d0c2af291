#include "causalprobe/circuit_export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "causalprobe/errors.hpp"
#include "causalprobe/value.hpp"

namespace causalprobe {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Rgb {
  int r, g, b;
};

std::string hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
  auto mix = [t](int x, int y) {
    return static_cast<int>(std::lround(x + t * (y - x)));
  };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// Darker blue shades for higher-magnitude positive effects, darker red
// shades for higher-magnitude negative effects.
std::string fill_color(double score, double max_magnitude) {
  double t = max_magnitude > 0.0 ? std::abs(score) / max_magnitude : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  static const Rgb kBlueLight{0xde, 0xeb, 0xf7}, kBlueDark{0x08, 0x30, 0x6b};
  static const Rgb kRedLight{0xfe, 0xe0, 0xd2}, kRedDark{0x67, 0x00, 0x0d};
  return score >= 0.0 ? hex(lerp(kBlueLight, kBlueDark, t))
                      : hex(lerp(kRedLight, kRedDark, t));
}

std::string short_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.4g", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string export_circuit_dot(const Circuit& circuit) {
  double max_mag = 0.0;
  for (const CircuitNode& n : circuit.nodes)
    max_mag = std::max(max_mag, std::abs(n.score));
  double max_edge = 0.0;
  for (const CircuitEdge& e : circuit.edges)
    max_edge = std::max(max_edge, std::abs(e.score));

  std::string out;
  out += "digraph circuit {\n";
  out += "  // target: " + circuit.target + "\n";
  out += "  // method: " + circuit.method + ", ablation: " + circuit.ablation +
         ", T_N=" + format_real(circuit.t_n) +
         ", T_E=" + format_real(circuit.t_e) + "\n";
  out += "  rankdir=LR;\n";
  out += "  node [style=filled];\n";
  for (const CircuitNode& n : circuit.nodes) {
    std::string label = n.name + "\\n" + short_score(n.score);
    std::string shape = "ellipse";
    std::string style = "filled";
    switch (n.provenance) {
      case CircuitNode::Provenance::Direct:
        break;
      case CircuitNode::Provenance::LocalExpansion:
        label += "\\nlocal: " + n.anchor;
        style = "filled,dashed";
        break;
      case CircuitNode::Provenance::SetSearch:
        label += "\\nset: {" + join(n.set_members, ", ") + "}";
        shape = "box";
        break;
      case CircuitNode::Provenance::Preempted:
        label += "\\nround " + std::to_string(n.round);
        shape = "doubleoctagon";
        break;
    }
    bool dark = max_mag > 0.0 && std::abs(n.score) / max_mag > 0.55;
    out += "  \"" + n.name + "\" [label=\"" + label + "\" shape=" + shape +
           " style=\"" + style + "\" fillcolor=\"" +
           fill_color(n.score, max_mag) + "\" fontcolor=\"" +
           (dark ? "white" : "black") + "\"];\n";
  }
  for (const CircuitEdge& e : circuit.edges) {
    out += "  \"" + e.upstream + "\" -> \"" + e.downstream + "\" [label=\"" +
           short_score(e.score) + "\" color=\"" +
           fill_color(e.score, max_edge) + "\"];\n";
  }
  out += "}\n";
  return out;
}

std::string export_circuit_json(const Circuit& circuit) {
  ordered_json j;
  j["format_version"] = circuit.format_version;
  j["target"] = circuit.target;
  j["method"] = circuit.method;
  j["ablation"] = circuit.ablation;
  j["granularity"] = circuit.granularity;
  j["t_n"] = circuit.t_n;
  j["t_e"] = circuit.t_e;
  j["signed_mode"] = circuit.signed_mode;
  j["inputs_as_mediators"] = circuit.inputs_as_mediators;
  j["nodes"] = ordered_json::array();
  for (const CircuitNode& n : circuit.nodes) {
    ordered_json node;
    node["name"] = n.name;
    node["score"] = n.score;
    node["provenance"] = provenance_name(n.provenance);
    switch (n.provenance) {
      case CircuitNode::Provenance::LocalExpansion:
        node["anchor"] = n.anchor;
        break;
      case CircuitNode::Provenance::SetSearch:
        node["set"] = n.set_members;
        break;
      case CircuitNode::Provenance::Preempted:
        node["round"] = n.round;
        break;
      case CircuitNode::Provenance::Direct:
        break;
    }
    j["nodes"].push_back(std::move(node));
  }
  j["edges"] = ordered_json::array();
  for (const CircuitEdge& e : circuit.edges) {
    ordered_json edge;
    edge["upstream"] = e.upstream;
    edge["downstream"] = e.downstream;
    edge["score"] = e.score;
    j["edges"].push_back(std::move(edge));
  }
  j["warnings"] = circuit.warnings;
  return j.dump(2) + "\n";
}

Circuit parse_circuit_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("bad circuit JSON: ") + e.what());
  }
  try {
    Circuit c;
    c.format_version = j.at("format_version").get<int>();
    c.target = j.at("target").get<std::string>();
    c.method = j.at("method").get<std::string>();
    c.ablation = j.at("ablation").get<std::string>();
    c.granularity = j.at("granularity").get<std::string>();
    c.t_n = j.at("t_n").get<double>();
    c.t_e = j.at("t_e").get<double>();
    c.signed_mode = j.at("signed_mode").get<bool>();
    if (j.contains("inputs_as_mediators"))
      c.inputs_as_mediators = j["inputs_as_mediators"].get<bool>();
    for (const auto& node : j.at("nodes")) {
      CircuitNode n;
      n.name = node.at("name").get<std::string>();
      n.ref = NodeRef::parse(n.name);
      n.score = node.at("score").get<double>();
      n.provenance = provenance_from_name(node.at("provenance"));
      if (node.contains("anchor")) n.anchor = node["anchor"].get<std::string>();
      if (node.contains("set"))
        n.set_members = node["set"].get<std::vector<std::string>>();
      if (node.contains("round")) n.round = node["round"].get<int>();
      c.nodes.push_back(std::move(n));
    }
    for (const auto& edge : j.at("edges")) {
      c.edges.push_back({edge.at("upstream").get<std::string>(),
                         edge.at("downstream").get<std::string>(),
                         edge.at("score").get<double>()});
    }
    if (j.contains("warnings"))
      c.warnings = j["warnings"].get<std::vector<std::string>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad circuit JSON: ") + e.what());
  }
}

std::string circuit_nodes_csv(const Circuit& circuit) {
  std::string out = "name,score,provenance,anchor,set,round\n";
  for (const CircuitNode& n : circuit.nodes) {
    out += n.name + "," + format_real(n.score) + "," +
           provenance_name(n.provenance) + "," + n.anchor + "," +
           join(n.set_members, "|") + "," +
           (n.provenance == CircuitNode::Provenance::Preempted
                ? std::to_string(n.round)
                : "") +
           "\n";
  }
  return out;
}

std::string circuit_edges_csv(const Circuit& circuit) {
  std::string out = "upstream,downstream,score\n";
  for (const CircuitEdge& e : circuit.edges)
    out += e.upstream + "," + e.downstream + "," + format_real(e.score) + "\n";
  return out;
}

}  // namespace causalprobe
