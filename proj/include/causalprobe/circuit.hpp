#ifndef CAUSALPROBE_CIRCUIT_HPP
#define CAUSALPROBE_CIRCUIT_HPP

#include <optional>
#include <string>
#include <vector>

#include "causalprobe/effects.hpp"

namespace causalprobe {

struct CircuitNode {
  enum class Provenance { Direct, LocalExpansion, SetSearch, Preempted };

  NodeRef ref;
  std::string name;
  double score = 0.0;  // mean effect; anchor-effect for expansion nodes
  Provenance provenance = Provenance::Direct;
  std::string anchor;                    // LocalExpansion
  std::vector<std::string> set_members;  // SetSearch
  int round = 0;                         // Preempted
};

struct CircuitEdge {
  std::string upstream;
  std::string downstream;
  double score = 0.0;
};

// Scored causal subgraph against a target metric. Node and edge order is
// canonical (mediator enumeration order), so equal circuits serialize to
// identical bytes.
struct Circuit {
  int format_version = 1;
  std::string target;        // metric description
  std::string method;        // estimator tag
  std::string ablation;      // ablation kind name
  std::string granularity;   // "neurons" | "features"
  double t_n = 0.4;
  double t_e = 0.04;
  bool signed_mode = false;
  bool inputs_as_mediators = true;
  std::vector<CircuitNode> nodes;
  std::vector<CircuitEdge> edges;
  std::vector<std::string> warnings;

  bool has_node(const std::string& name) const;
  const CircuitNode* find_node(const std::string& name) const;
};

const char* provenance_name(CircuitNode::Provenance p);
CircuitNode::Provenance provenance_from_name(const std::string& name);

struct DiscoveryOptions {
  double t_n = 0.4;   // node threshold (App-A default)
  double t_e = 0.04;  // edge threshold (App-A default)
  Estimator estimator = Estimator::exact();
  AblationKind kind = AblationKind::zero();
  Granularity granularity = Granularity::Neurons;
  // Thresholds apply to |effect| by default; signed mode keeps only
  // effects strictly above the threshold.
  bool signed_mode = false;
  // Whether raw input coordinates count as mediators for direct
  // admission. Off, inputs can still enter through local expansion.
  bool include_inputs = true;
};

// Threshold-based discovery: per-node mean effects over the dataset, nodes
// above t_n, then edge attributions between kept adjacent nodes above t_e.
Circuit discover_circuit(const NeuralNetwork& net,
                         const FeatureDictionary* dict, const Dataset& dataset,
                         const TargetMetric& metric,
                         const DiscoveryOptions& options);

// Effect of `up` on `down`'s activation (the downstream activation is the
// metric), using the chosen estimator. `up` must precede `down`.
double edge_attribution(const NeuralNetwork& net, const FeatureDictionary* dict,
                        const std::vector<double>& x, const NodeRef& up,
                        const NodeRef& down, const Estimator& estimator,
                        const AblationKind& kind);

// Re-runs discovery with the metric swapped to the anchor's activation and
// merges newly found upstream nodes (marked with the anchor) into the
// circuit; one level deep, idempotent for a fixed anchor. Nodes admitted
// by a non-exact estimator are verified by exact recomputation and dropped
// (with a warning) if the exact effect does not clear t_n.
Circuit expand_local_dependencies(const NeuralNetwork& net,
                                  const FeatureDictionary* dict,
                                  const Circuit& circuit,
                                  const std::string& anchor_name,
                                  const Dataset& dataset, double t_n,
                                  const Estimator& estimator,
                                  const AblationKind& kind);

struct Faithfulness {
  bool defined = true;       // false when the full-model metric is zero
  double retention = 0.0;    // clamped to [0, 1]
  double raw_ratio = 0.0;    // unclamped mean ratio
};

// Ablates (by `kind`) every mediator outside the circuit except
// output-layer nodes and reports mean metric retention.
Faithfulness circuit_faithfulness(const NeuralNetwork& net,
                                  const FeatureDictionary* dict,
                                  const Circuit& circuit,
                                  const Dataset& dataset,
                                  const TargetMetric& metric,
                                  const AblationKind& kind);

struct SetSearchOptions {
  std::size_t k_max = 2;
  bool preemption_rounds = false;
  std::size_t max_rounds = 3;
};

// Like discover_circuit, but members of minimal ablation sets (size >= 2)
// whose joint effect exceeds t_n also enter, annotated with their set;
// with preemption rounds enabled, nodes surfacing in round >= 2 enter
// annotated with their round.
Circuit discover_with_set_search(const NeuralNetwork& net,
                                 const FeatureDictionary* dict,
                                 const Dataset& dataset,
                                 const TargetMetric& metric,
                                 const DiscoveryOptions& options,
                                 const SetSearchOptions& search);

}  // namespace causalprobe

#endif
