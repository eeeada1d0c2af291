#ifndef CAUSALPROBE_ABLATION_HPP
#define CAUSALPROBE_ABLATION_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "causalprobe/network.hpp"

namespace causalprobe {

// Replacement rule for a node's post-activation.
//   zero      replace with 0
//   mean      node's mean activation over a reference dataset
//   resample  node's activation on a seeded random reference example
//   patch     node's activation on a fixed patch input
//   inject    a fixed value
struct AblationKind {
  enum class Kind { Zero, Mean, Resample, Patch, Inject };

  Kind kind = Kind::Zero;
  std::shared_ptr<const Dataset> reference;  // Mean, Resample (non-empty)
  std::uint64_t seed = 0;                    // Resample
  std::vector<double> x_patch;               // Patch
  double value = 0.0;                        // Inject (finite)

  static AblationKind zero();
  static AblationKind mean(std::shared_ptr<const Dataset> reference);
  static AblationKind resample(std::shared_ptr<const Dataset> reference,
                               std::uint64_t seed);
  static AblationKind patch(std::vector<double> x_patch);
  static AblationKind inject(double value);

  const char* name() const;
};

// Replacement value for one node under a kind, in the context of the
// given original input.
double replacement_value(const NeuralNetwork& net,
                         const FeatureDictionary* dict,
                         const std::vector<double>& input,
                         const NodeRef& node, const AblationKind& kind);

// Replacement values for many nodes at once: one patch forward (or one
// pass over the reference dataset) covers every node.
std::vector<double> replacement_table(const NeuralNetwork& net,
                                      const FeatureDictionary* dict,
                                      const std::vector<double>& input,
                                      const std::vector<NodeRef>& nodes,
                                      const AblationKind& kind);

// Forward pass where each listed node's value (input coordinate, neuron
// post-activation, or feature) is overwritten before downstream
// propagation. Upstream and parallel values match the plain forward trace
// bit for bit.
ActivationTrace forward_with_overrides(
    const NeuralNetwork& net, const FeatureDictionary* dict,
    const std::vector<double>& input,
    const std::vector<std::pair<NodeRef, double>>& overrides);

// Single-node ablation per the kind.
ActivationTrace apply_ablation(const NeuralNetwork& net,
                               const FeatureDictionary* dict,
                               const std::vector<double>& input,
                               const NodeRef& node, const AblationKind& kind);

// Mediator granularity: Neurons = inputs + every layer's neurons;
// Features = inputs + neurons of non-attach layers + dictionary features.
enum class Granularity { Neurons, Features };

std::vector<NodeRef> mediators(const NeuralNetwork& net,
                               const FeatureDictionary* dict,
                               Granularity granularity);

// Directed mediator adjacency (upstream, downstream) pairs following the
// network structure.
std::vector<std::pair<NodeRef, NodeRef>> mediator_edges(
    const NeuralNetwork& net, const FeatureDictionary* dict,
    Granularity granularity);

// True when `up` strictly precedes `down` in the computation order.
bool precedes(const NeuralNetwork& net, const FeatureDictionary* dict,
              const NodeRef& up, const NodeRef& down);

}  // namespace causalprobe

#endif
