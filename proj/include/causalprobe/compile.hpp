#ifndef CAUSALPROBE_COMPILE_HPP
#define CAUSALPROBE_COMPILE_HPP

#include "causalprobe/network.hpp"
#include "causalprobe/scm.hpp"

namespace causalprobe {

// Network compiled into a structural causal model: one variable per input
// (exogenous) and per neuron, plus one per feature when a dictionary is
// attached (consumers then read the inlined reconstruction). Variable
// names follow NodeRef::name(). Evaluating the graph reproduces the
// forward pass exactly, operation for operation.
struct CompiledGraph {
  CausalGraph graph;
  std::vector<NodeRef> inputs;
  std::vector<NodeRef> nodes;  // neurons and features, evaluation order
};

CompiledGraph compile_to_graph(const NeuralNetwork& net,
                               const FeatureDictionary* dict = nullptr);

// Exogenous assignment for a compiled graph from a network input vector.
Assignment input_assignment(const NeuralNetwork& net,
                            const std::vector<double>& input);

}  // namespace causalprobe

#endif
