#ifndef CAUSALPROBE_EFFECTS_HPP
#define CAUSALPROBE_EFFECTS_HPP

#include <string>
#include <vector>

#include "causalprobe/ablation.hpp"
#include "causalprobe/ablation_search.hpp"
#include "causalprobe/metrics.hpp"
#include "causalprobe/network.hpp"

namespace causalprobe {

// Indirect-effect estimator selection.
struct Estimator {
  enum class Kind { Exact, Linear, IntegratedGradients };
  Kind kind = Kind::Exact;
  int steps = 8;  // IntegratedGradients only, >= 1

  static Estimator exact() { return {Kind::Exact, 0}; }
  static Estimator linear() { return {Kind::Linear, 0}; }
  static Estimator integrated_gradients(int steps);

  std::string tag() const;
  static Estimator from_tag(const std::string& tag);
};

// Per-node indirect-effect estimates for one context (or dataset means).
struct EffectTable {
  std::vector<NodeRef> nodes;
  std::vector<std::string> names;
  std::vector<double> effects;
  std::vector<double> variances;  // filled by effect_sweep, else empty
  std::string method;             // "exact" | "linear" | "ig(n)"
  std::string context;
  std::vector<std::string> warnings;

  double effect_of(const NodeRef& node) const;
};

// metric(run with the node ablated) - metric(original run).
double indirect_effect_exact(const NeuralNetwork& net,
                             const FeatureDictionary* dict,
                             const std::vector<double>& x_original,
                             const NodeRef& node, const AblationKind& kind,
                             const TargetMetric& metric);

// First-order estimate for every mediator at once: one original forward,
// one backward, plus the replacement-value computation:
//   IE-hat(node) = dy/da |_original * (a_replacement - a_original)
EffectTable attribution_patching(const NeuralNetwork& net,
                                 const FeatureDictionary* dict,
                                 const std::vector<double>& x_original,
                                 const AblationKind& kind,
                                 const TargetMetric& metric,
                                 Granularity granularity);

// Integrated-gradients refinement: gradients at `steps` left endpoints of
// equal subintervals along the straight line from the original to the
// replacement activation, in the ablated node's coordinate only (input
// held fixed, downstream recomputed). steps=1 reduces exactly to
// attribution_patching.
EffectTable integrated_gradients_ie(const NeuralNetwork& net,
                                    const FeatureDictionary* dict,
                                    const std::vector<double>& x_original,
                                    const AblationKind& kind,
                                    const TargetMetric& metric, int steps,
                                    Granularity granularity);

// Estimator dispatch for a single node and context.
double node_effect(const NeuralNetwork& net, const FeatureDictionary* dict,
                   const std::vector<double>& x, const NodeRef& node,
                   const AblationKind& kind, const TargetMetric& metric,
                   const Estimator& estimator);

// Per-node mean and population variance of the chosen estimator over a
// dataset. A per-example error aborts with the example index in the
// message.
EffectTable effect_sweep(const NeuralNetwork& net,
                         const FeatureDictionary* dict, const Dataset& dataset,
                         const AblationKind& kind, const TargetMetric& metric,
                         const Estimator& estimator, Granularity granularity);

// Noising: the node's patch-run activation patched into the original run.
// Denoising: the node's original activation patched into the patch run.
struct BidirectionalResult {
  double noising_delta = 0.0;
  double denoising_delta = 0.0;

  bool flags_causal(double epsilon) const;
};

BidirectionalResult bidirectional_test(const NeuralNetwork& net,
                                       const FeatureDictionary* dict,
                                       const std::vector<double>& x_original,
                                       const std::vector<double>& x_patch,
                                       const NodeRef& node,
                                       const TargetMetric& metric);

// Negative counterfactual (null the node) and positive counterfactual
// (inject a high activation). inject_value must stay inside the
// sanctioned range [min(0,a) - f(|a|+1), max(0,a) + f(|a|+1)] where a is
// the node's observed activation and f the safety factor.
struct PosNegResult {
  double ablation_delta = 0.0;
  double injection_delta = 0.0;

  bool flags_causal(double epsilon) const;
};

PosNegResult positive_negative_counterfactual(
    const NeuralNetwork& net, const FeatureDictionary* dict,
    const std::vector<double>& input, const NodeRef& node, double inject_value,
    const TargetMetric& metric, double safety_factor = 10.0);

// Network-backed system for subset search: masked nodes are jointly
// ablated by their kind; the metric is averaged over the given inputs.
class NetworkAblationSystem : public AblationSystem {
 public:
  NetworkAblationSystem(const NeuralNetwork& net, const FeatureDictionary* dict,
                        std::vector<std::vector<double>> inputs,
                        std::vector<NodeRef> candidates, AblationKind kind,
                        TargetMetric metric);

  std::size_t candidate_count() const override { return candidates_.size(); }
  const std::string& candidate_name(std::size_t i) const override {
    return names_[i];
  }
  double metric(const std::vector<bool>& ablate_mask) const override;

  const std::vector<NodeRef>& candidates() const { return candidates_; }

 private:
  const NeuralNetwork& net_;
  const FeatureDictionary* dict_;
  std::vector<std::vector<double>> inputs_;
  std::vector<NodeRef> candidates_;
  std::vector<std::string> names_;
  AblationKind kind_;
  TargetMetric metric_;
  // Replacement values per input per candidate, fixed at construction.
  std::vector<std::vector<double>> replacements_;
};

// Warning text attached when raw neurons (or inputs) are zero-ablated.
extern const char* const kZeroAblationWarning;

}  // namespace causalprobe

#endif
