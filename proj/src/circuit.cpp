#include "causalprobe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "causalprobe/errors.hpp"

namespace causalprobe {

bool Circuit::has_node(const std::string& name) const {
  return find_node(name) != nullptr;
}

const CircuitNode* Circuit::find_node(const std::string& name) const {
  for (const CircuitNode& n : nodes)
    if (n.name == name) return &n;
  return nullptr;
}

const char* provenance_name(CircuitNode::Provenance p) {
  switch (p) {
    case CircuitNode::Provenance::Direct: return "direct";
    case CircuitNode::Provenance::LocalExpansion: return "local-expansion";
    case CircuitNode::Provenance::SetSearch: return "set-search";
    case CircuitNode::Provenance::Preempted: return "preempted";
  }
  return "?";
}

CircuitNode::Provenance provenance_from_name(const std::string& name) {
  if (name == "direct") return CircuitNode::Provenance::Direct;
  if (name == "local-expansion") return CircuitNode::Provenance::LocalExpansion;
  if (name == "set-search") return CircuitNode::Provenance::SetSearch;
  if (name == "preempted") return CircuitNode::Provenance::Preempted;
  throw ValidationError("unknown provenance '" + name + "'");
}

namespace {

bool clears(double effect, double threshold, bool signed_mode) {
  return signed_mode ? effect > threshold : std::abs(effect) > threshold;
}

double mean_edge_attribution(const NeuralNetwork& net,
                             const FeatureDictionary* dict,
                             const Dataset& dataset, const NodeRef& up,
                             const NodeRef& down, const Estimator& estimator,
                             const AblationKind& kind) {
  double sum = 0.0;
  for (const Example& ex : dataset.examples)
    sum += edge_attribution(net, dict, ex.input, up, down, estimator, kind);
  return sum / static_cast<double>(dataset.size());
}

// Edges among the circuit's nodes along the network structure, scores
// above t_e, in canonical order.
void rebuild_edges(Circuit& circuit, const NeuralNetwork& net,
                   const FeatureDictionary* dict, const Dataset& dataset,
                   const Estimator& estimator, const AblationKind& kind,
                   Granularity granularity) {
  circuit.edges.clear();
  std::map<std::string, NodeRef> in_circuit;
  for (const CircuitNode& n : circuit.nodes) in_circuit[n.name] = n.ref;

  for (const auto& [up, down] : mediator_edges(net, dict, granularity)) {
    if (!in_circuit.count(up.name()) || !in_circuit.count(down.name()))
      continue;
    double score =
        mean_edge_attribution(net, dict, dataset, up, down, estimator, kind);
    if (clears(score, circuit.t_e, circuit.signed_mode))
      circuit.edges.push_back({up.name(), down.name(), score});
  }
}

// Keep circuit.nodes in the canonical mediator order.
void sort_nodes(Circuit& circuit) {
  std::stable_sort(circuit.nodes.begin(), circuit.nodes.end(),
                   [](const CircuitNode& a, const CircuitNode& b) {
                     return a.ref < b.ref;
                   });
}

Granularity granularity_from(const Circuit& circuit) {
  return circuit.granularity == "features" ? Granularity::Features
                                           : Granularity::Neurons;
}

}  // namespace

Circuit discover_circuit(const NeuralNetwork& net, const FeatureDictionary* dict,
                         const Dataset& dataset, const TargetMetric& metric,
                         const DiscoveryOptions& options) {
  if (options.t_n < 0.0 || options.t_e < 0.0)
    throw ValidationError("thresholds must be nonnegative");
  if (dataset.empty()) throw ValidationError("discovery needs a dataset");

  EffectTable table = effect_sweep(net, dict, dataset, options.kind, metric,
                                   options.estimator, options.granularity);

  Circuit circuit;
  circuit.target = metric.describe();
  circuit.method = options.estimator.tag();
  circuit.ablation = options.kind.name();
  circuit.granularity =
      options.granularity == Granularity::Features ? "features" : "neurons";
  circuit.t_n = options.t_n;
  circuit.t_e = options.t_e;
  circuit.signed_mode = options.signed_mode;
  circuit.inputs_as_mediators = options.include_inputs;
  circuit.warnings = table.warnings;

  for (std::size_t i = 0; i < table.nodes.size(); ++i) {
    if (!options.include_inputs &&
        table.nodes[i].kind == NodeRef::Kind::Input)
      continue;
    if (!clears(table.effects[i], options.t_n, options.signed_mode)) continue;
    CircuitNode node;
    node.ref = table.nodes[i];
    node.name = table.names[i];
    node.score = table.effects[i];
    circuit.nodes.push_back(std::move(node));
  }

  rebuild_edges(circuit, net, dict, dataset, options.estimator, options.kind,
                options.granularity);
  return circuit;
}

double edge_attribution(const NeuralNetwork& net, const FeatureDictionary* dict,
                        const std::vector<double>& x, const NodeRef& up,
                        const NodeRef& down, const Estimator& estimator,
                        const AblationKind& kind) {
  if (!precedes(net, dict, up, down))
    throw ValidationError("edge attribution needs " + up.name() +
                          " upstream of " + down.name());
  return node_effect(net, dict, x, up, kind,
                     TargetMetric::node_activation(down), estimator);
}

Circuit expand_local_dependencies(const NeuralNetwork& net,
                                  const FeatureDictionary* dict,
                                  const Circuit& circuit,
                                  const std::string& anchor_name,
                                  const Dataset& dataset, double t_n,
                                  const Estimator& estimator,
                                  const AblationKind& kind) {
  const CircuitNode* anchor = circuit.find_node(anchor_name);
  if (!anchor)
    throw ValidationError("expansion anchor '" + anchor_name +
                          "' is not a circuit node");
  Granularity granularity = granularity_from(circuit);
  TargetMetric anchor_metric = TargetMetric::node_activation(anchor->ref);

  EffectTable table = effect_sweep(net, dict, dataset, kind, anchor_metric,
                                   estimator, granularity);

  Circuit out = circuit;
  for (std::size_t i = 0; i < table.nodes.size(); ++i) {
    const NodeRef& node = table.nodes[i];
    if (!precedes(net, dict, node, anchor->ref)) continue;
    if (!clears(table.effects[i], t_n, circuit.signed_mode)) continue;
    if (out.has_node(table.names[i])) continue;

    double score = table.effects[i];
    if (estimator.kind != Estimator::Kind::Exact) {
      // Marked nodes must clear the threshold on the exact effect.
      double exact_sum = 0.0;
      for (const Example& ex : dataset.examples)
        exact_sum += indirect_effect_exact(net, dict, ex.input, node, kind,
                                           anchor_metric);
      double exact = exact_sum / static_cast<double>(dataset.size());
      if (!clears(exact, t_n, circuit.signed_mode)) {
        out.warnings.push_back("expansion candidate " + table.names[i] +
                               " admitted by " + estimator.tag() +
                               " but rejected by exact recomputation");
        continue;
      }
      score = exact;
    }

    CircuitNode added;
    added.ref = node;
    added.name = table.names[i];
    added.score = score;
    added.provenance = CircuitNode::Provenance::LocalExpansion;
    added.anchor = anchor_name;
    out.nodes.push_back(std::move(added));
  }

  sort_nodes(out);
  rebuild_edges(out, net, dict, dataset, estimator, kind, granularity);
  return out;
}

Faithfulness circuit_faithfulness(const NeuralNetwork& net,
                                  const FeatureDictionary* dict,
                                  const Circuit& circuit,
                                  const Dataset& dataset,
                                  const TargetMetric& metric,
                                  const AblationKind& kind) {
  if (dataset.empty()) throw ValidationError("faithfulness needs a dataset");
  metric.validate(net, dict);
  Granularity granularity = granularity_from(circuit);

  const int last_layer = static_cast<int>(net.layer_count()) - 1;
  std::vector<NodeRef> outside;
  for (const NodeRef& node : mediators(net, dict, granularity)) {
    if (node.kind == NodeRef::Kind::Neuron && node.layer == last_layer)
      continue;  // output layer carries the metric
    if (node.kind == NodeRef::Kind::Input && !circuit.inputs_as_mediators)
      continue;
    if (circuit.has_node(node.name())) continue;
    outside.push_back(node);
  }

  double ratio_sum = 0.0;
  for (const Example& ex : dataset.examples) {
    double full = metric.value(forward(net, ex.input, dict));
    if (full == 0.0)
      return Faithfulness{false, 0.0, 0.0};

    std::vector<std::pair<NodeRef, double>> overrides;
    overrides.reserve(outside.size());
    for (const NodeRef& node : outside)
      overrides.emplace_back(
          node, replacement_value(net, dict, ex.input, node, kind));
    double ablated =
        metric.value(forward_with_overrides(net, dict, ex.input, overrides));
    ratio_sum += ablated / full;
  }

  Faithfulness f;
  f.raw_ratio = ratio_sum / static_cast<double>(dataset.size());
  f.retention = std::clamp(f.raw_ratio, 0.0, 1.0);
  return f;
}

Circuit discover_with_set_search(const NeuralNetwork& net,
                                 const FeatureDictionary* dict,
                                 const Dataset& dataset,
                                 const TargetMetric& metric,
                                 const DiscoveryOptions& options,
                                 const SetSearchOptions& search) {
  if (search.k_max < 1) throw ValidationError("k_max must be >= 1");
  Circuit circuit = discover_circuit(net, dict, dataset, metric, options);

  // Candidates for joint/round ablation exclude the metric's carriers:
  // output-layer nodes and the metric's own node. Ablating those pins the
  // metric instead of probing causes.
  const int last_layer = static_cast<int>(net.layer_count()) - 1;
  std::vector<NodeRef> candidates;
  for (const NodeRef& node : mediators(net, dict, options.granularity)) {
    if (node.kind == NodeRef::Kind::Neuron && node.layer == last_layer)
      continue;
    if (node.kind == NodeRef::Kind::Input && !options.include_inputs)
      continue;
    if (metric.kind() == TargetMetric::Kind::NodeActivation &&
        node == metric.node())
      continue;
    candidates.push_back(node);
  }
  std::vector<std::vector<double>> inputs;
  for (const Example& ex : dataset.examples) inputs.push_back(ex.input);
  NetworkAblationSystem system(net, dict, std::move(inputs), candidates,
                               options.kind, metric);

  if (search.k_max >= 2) {
    OverdeterminationReport report = find_minimal_ablation_sets(
        system, options.t_n, search.k_max, SearchMode::Exhaustive);
    for (const auto& set : report.minimal_sets) {
      if (set.nodes.size() < 2) continue;
      for (const std::string& name : set.nodes) {
        if (circuit.has_node(name)) continue;
        CircuitNode node;
        node.ref = NodeRef::parse(name);
        node.name = name;
        node.score = set.effect_delta;
        node.provenance = CircuitNode::Provenance::SetSearch;
        node.set_members = set.nodes;
        circuit.nodes.push_back(std::move(node));
      }
    }
    for (const std::string& w : report.warnings) circuit.warnings.push_back(w);
  }

  if (search.preemption_rounds) {
    PreemptionReport report =
        detect_preemption(system, options.t_n, search.max_rounds);
    for (std::size_t r = 1; r < report.rounds.size(); ++r) {
      for (const std::string& name : report.rounds[r].discovered) {
        if (circuit.has_node(name)) continue;
        CircuitNode node;
        node.ref = NodeRef::parse(name);
        node.name = name;
        node.score = report.rounds[r].singleton_effects.at(name);
        node.provenance = CircuitNode::Provenance::Preempted;
        node.round = static_cast<int>(r + 1);
        circuit.nodes.push_back(std::move(node));
      }
    }
  }

  sort_nodes(circuit);
  rebuild_edges(circuit, net, dict, dataset, options.estimator, options.kind,
                options.granularity);
  return circuit;
}

}  // namespace causalprobe
