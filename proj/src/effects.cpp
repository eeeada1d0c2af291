#include "causalprobe/effects.hpp"

#include <algorithm>
#include <cmath>

#include "causalprobe/autodiff.hpp"
#include "causalprobe/errors.hpp"

namespace causalprobe {

const char* const kZeroAblationWarning =
    "zero ablation of raw neurons/inputs is generally not principled; "
    "prefer mean or resample ablations, or attach a feature dictionary";

Estimator Estimator::integrated_gradients(int steps) {
  if (steps < 1)
    throw ValidationError("integrated gradients needs steps >= 1");
  return {Kind::IntegratedGradients, steps};
}

std::string Estimator::tag() const {
  switch (kind) {
    case Kind::Exact: return "exact";
    case Kind::Linear: return "linear";
    case Kind::IntegratedGradients:
      return "ig(" + std::to_string(steps) + ")";
  }
  return "?";
}

Estimator Estimator::from_tag(const std::string& tag) {
  if (tag == "exact") return exact();
  if (tag == "linear") return linear();
  if (tag.rfind("ig", 0) == 0) {
    std::string inner = tag.substr(2);
    if (!inner.empty() && inner.front() == ':') inner = inner.substr(1);
    if (!inner.empty() && inner.front() == '(' && inner.back() == ')')
      inner = inner.substr(1, inner.size() - 2);
    if (inner.empty()) return integrated_gradients(8);
    try {
      return integrated_gradients(std::stoi(inner));
    } catch (const std::exception&) {
    }
  }
  throw ValidationError("unknown estimator '" + tag +
                        "' (use exact, linear, or ig:steps)");
}

double EffectTable::effect_of(const NodeRef& node) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == node) return effects[i];
  throw ValidationError("node " + node.name() + " not in effect table");
}

double indirect_effect_exact(const NeuralNetwork& net,
                             const FeatureDictionary* dict,
                             const std::vector<double>& x_original,
                             const NodeRef& node, const AblationKind& kind,
                             const TargetMetric& metric) {
  metric.validate(net, dict);
  ActivationTrace original = forward(net, x_original, dict);
  ActivationTrace ablated = apply_ablation(net, dict, x_original, node, kind);
  return metric.value(ablated) - metric.value(original);
}

namespace {

void maybe_warn_zero(const AblationKind& kind, Granularity granularity,
                     std::vector<std::string>& warnings) {
  if (kind.kind == AblationKind::Kind::Zero &&
      granularity == Granularity::Neurons)
    warnings.push_back(kZeroAblationWarning);
}

}  // namespace

EffectTable attribution_patching(const NeuralNetwork& net,
                                 const FeatureDictionary* dict,
                                 const std::vector<double>& x_original,
                                 const AblationKind& kind,
                                 const TargetMetric& metric,
                                 Granularity granularity) {
  metric.validate(net, dict);
  ActivationTrace original = forward(net, x_original, dict);
  GradientMap grad = backward(net, original, metric, dict);

  EffectTable table;
  table.nodes = mediators(net, dict, granularity);
  table.method = "linear";
  table.context = metric.describe() + ", " + kind.name() + " ablation";
  maybe_warn_zero(kind, granularity, table.warnings);
  std::vector<double> repl =
      replacement_table(net, dict, x_original, table.nodes, kind);
  for (std::size_t i = 0; i < table.nodes.size(); ++i) {
    const NodeRef& node = table.nodes[i];
    table.names.push_back(node.name());
    table.effects.push_back(grad.at(node) * (repl[i] - original.at(node)));
  }
  return table;
}

EffectTable integrated_gradients_ie(const NeuralNetwork& net,
                                    const FeatureDictionary* dict,
                                    const std::vector<double>& x_original,
                                    const AblationKind& kind,
                                    const TargetMetric& metric, int steps,
                                    Granularity granularity) {
  if (steps < 1) throw ValidationError("integrated gradients needs steps >= 1");
  metric.validate(net, dict);
  ActivationTrace original = forward(net, x_original, dict);

  EffectTable table;
  table.nodes = mediators(net, dict, granularity);
  table.method = "ig(" + std::to_string(steps) + ")";
  table.context = metric.describe() + ", " + kind.name() +
                  " ablation, left-endpoint steps";
  maybe_warn_zero(kind, granularity, table.warnings);
  std::vector<double> repl =
      replacement_table(net, dict, x_original, table.nodes, kind);

  for (std::size_t idx = 0; idx < table.nodes.size(); ++idx) {
    const NodeRef& node = table.nodes[idx];
    table.names.push_back(node.name());
    double a0 = original.at(node);
    double a1 = repl[idx];
    double mean_grad = 0.0;
    for (int s = 0; s < steps; ++s) {
      double alpha = static_cast<double>(s) / static_cast<double>(steps);
      double a = a0 + alpha * (a1 - a0);
      ActivationTrace t =
          forward_with_overrides(net, dict, x_original, {{node, a}});
      mean_grad += backward(net, t, metric, dict).at(node);
    }
    mean_grad /= static_cast<double>(steps);
    table.effects.push_back(mean_grad * (a1 - a0));
  }
  return table;
}

double node_effect(const NeuralNetwork& net, const FeatureDictionary* dict,
                   const std::vector<double>& x, const NodeRef& node,
                   const AblationKind& kind, const TargetMetric& metric,
                   const Estimator& estimator) {
  switch (estimator.kind) {
    case Estimator::Kind::Exact:
      return indirect_effect_exact(net, dict, x, node, kind, metric);
    case Estimator::Kind::Linear: {
      ActivationTrace original = forward(net, x, dict);
      GradientMap grad = backward(net, original, metric, dict);
      double repl = replacement_value(net, dict, x, node, kind);
      return grad.at(node) * (repl - original.at(node));
    }
    case Estimator::Kind::IntegratedGradients: {
      ActivationTrace original = forward(net, x, dict);
      double a0 = original.at(node);
      double a1 = replacement_value(net, dict, x, node, kind);
      double mean_grad = 0.0;
      for (int s = 0; s < estimator.steps; ++s) {
        double alpha =
            static_cast<double>(s) / static_cast<double>(estimator.steps);
        double a = a0 + alpha * (a1 - a0);
        ActivationTrace t = forward_with_overrides(net, dict, x, {{node, a}});
        mean_grad += backward(net, t, metric, dict).at(node);
      }
      mean_grad /= static_cast<double>(estimator.steps);
      return mean_grad * (a1 - a0);
    }
  }
  throw ValidationError("bad estimator");
}

EffectTable effect_sweep(const NeuralNetwork& net,
                         const FeatureDictionary* dict, const Dataset& dataset,
                         const AblationKind& kind, const TargetMetric& metric,
                         const Estimator& estimator, Granularity granularity) {
  if (dataset.empty()) throw ValidationError("effect_sweep needs a dataset");
  metric.validate(net, dict);

  EffectTable table;
  table.nodes = mediators(net, dict, granularity);
  table.method = estimator.tag();
  table.context = metric.describe() + ", " + kind.name() + " ablation, " +
                  std::to_string(dataset.size()) + " examples";
  maybe_warn_zero(kind, granularity, table.warnings);
  for (const NodeRef& node : table.nodes) table.names.push_back(node.name());

  const std::size_t n = table.nodes.size();
  std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
  for (std::size_t e = 0; e < dataset.size(); ++e) {
    try {
      for (std::size_t i = 0; i < n; ++i) {
        double v = node_effect(net, dict, dataset.examples[e].input,
                               table.nodes[i], kind, metric, estimator);
        sum[i] += v;
        sumsq[i] += v * v;
      }
    } catch (const Error& err) {
      throw EvalError("effect_sweep failed at example " + std::to_string(e) +
                      ": " + err.what());
    }
  }
  const double m = static_cast<double>(dataset.size());
  table.effects.resize(n);
  table.variances.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    table.effects[i] = sum[i] / m;
    double var = sumsq[i] / m - table.effects[i] * table.effects[i];
    table.variances[i] = var > 0.0 ? var : 0.0;
  }
  return table;
}

bool BidirectionalResult::flags_causal(double epsilon) const {
  return std::abs(noising_delta) > epsilon ||
         std::abs(denoising_delta) > epsilon;
}

BidirectionalResult bidirectional_test(const NeuralNetwork& net,
                                       const FeatureDictionary* dict,
                                       const std::vector<double>& x_original,
                                       const std::vector<double>& x_patch,
                                       const NodeRef& node,
                                       const TargetMetric& metric) {
  if (x_original.size() != x_patch.size())
    throw ValidationError("x_original and x_patch shapes differ");
  metric.validate(net, dict);

  ActivationTrace original = forward(net, x_original, dict);
  ActivationTrace patch = forward(net, x_patch, dict);

  BidirectionalResult r;
  ActivationTrace noised = forward_with_overrides(net, dict, x_original,
                                                  {{node, patch.at(node)}});
  r.noising_delta = metric.value(noised) - metric.value(original);
  ActivationTrace denoised = forward_with_overrides(net, dict, x_patch,
                                                    {{node, original.at(node)}});
  r.denoising_delta = metric.value(denoised) - metric.value(patch);
  return r;
}

bool PosNegResult::flags_causal(double epsilon) const {
  return std::abs(ablation_delta) > epsilon ||
         std::abs(injection_delta) > epsilon;
}

PosNegResult positive_negative_counterfactual(
    const NeuralNetwork& net, const FeatureDictionary* dict,
    const std::vector<double>& input, const NodeRef& node, double inject_value,
    const TargetMetric& metric, double safety_factor) {
  metric.validate(net, dict);
  ActivationTrace original = forward(net, input, dict);
  double a = original.at(node);
  double margin = safety_factor * (std::abs(a) + 1.0);
  double lo = std::min(0.0, a) - margin;
  double hi = std::max(0.0, a) + margin;
  if (!(inject_value >= lo && inject_value <= hi))
    throw ValidationError("inject value " + format_real(inject_value) +
                          " outside sanctioned range [" + format_real(lo) +
                          ", " + format_real(hi) + "]");

  double base = metric.value(original);
  PosNegResult r;
  ActivationTrace nulled =
      forward_with_overrides(net, dict, input, {{node, 0.0}});
  r.ablation_delta = metric.value(nulled) - base;
  ActivationTrace injected =
      forward_with_overrides(net, dict, input, {{node, inject_value}});
  r.injection_delta = metric.value(injected) - base;
  return r;
}

NetworkAblationSystem::NetworkAblationSystem(
    const NeuralNetwork& net, const FeatureDictionary* dict,
    std::vector<std::vector<double>> inputs, std::vector<NodeRef> candidates,
    AblationKind kind, TargetMetric metric)
    : net_(net),
      dict_(dict),
      inputs_(std::move(inputs)),
      candidates_(std::move(candidates)),
      kind_(std::move(kind)),
      metric_(std::move(metric)) {
  if (inputs_.empty())
    throw ValidationError("network ablation system needs at least one input");
  metric_.validate(net_, dict_);
  for (const NodeRef& node : candidates_) names_.push_back(node.name());
  replacements_.resize(inputs_.size());
  for (std::size_t e = 0; e < inputs_.size(); ++e)
    replacements_[e] =
        replacement_table(net_, dict_, inputs_[e], candidates_, kind_);
}

double NetworkAblationSystem::metric(const std::vector<bool>& ablate_mask) const {
  double sum = 0.0;
  for (std::size_t e = 0; e < inputs_.size(); ++e) {
    std::vector<std::pair<NodeRef, double>> overrides;
    for (std::size_t i = 0; i < candidates_.size(); ++i)
      if (ablate_mask[i])
        overrides.emplace_back(candidates_[i], replacements_[e][i]);
    ActivationTrace t = forward_with_overrides(net_, dict_, inputs_[e], overrides);
    sum += metric_.value(t);
  }
  return sum / static_cast<double>(inputs_.size());
}

}  // namespace causalprobe
