#ifndef CAUSALPROBE_AUTODIFF_HPP
#define CAUSALPROBE_AUTODIFF_HPP

#include "causalprobe/metrics.hpp"
#include "causalprobe/network.hpp"

namespace causalprobe {

// Exact reverse-mode derivatives of a scalar metric with respect to every
// input coordinate, every post-activation, and every feature activation
// when a dictionary is attached. Shapes mirror the trace.
struct GradientMap {
  std::vector<double> d_input;
  std::vector<std::vector<double>> d_post;
  std::vector<double> d_features;

  double at(const NodeRef& node) const;
};

// Reverse sweep over the given trace. The trace may be an ablated one;
// gradients are then taken at the ablated activations.
GradientMap backward(const NeuralNetwork& net, const ActivationTrace& trace,
                     const TargetMetric& metric,
                     const FeatureDictionary* dict = nullptr);

// Convenience: forward then backward at `input`.
GradientMap backward_at(const NeuralNetwork& net,
                        const std::vector<double>& input,
                        const TargetMetric& metric,
                        const FeatureDictionary* dict = nullptr);

}  // namespace causalprobe

#endif
