#include "causalprobe/ablation.hpp"

#include <cmath>
#include <map>

#include "causalprobe/errors.hpp"

namespace causalprobe {

AblationKind AblationKind::zero() { return AblationKind{}; }

AblationKind AblationKind::mean(std::shared_ptr<const Dataset> reference) {
  if (!reference || reference->empty())
    throw ValidationError("mean ablation needs a non-empty reference dataset");
  AblationKind k;
  k.kind = Kind::Mean;
  k.reference = std::move(reference);
  return k;
}

AblationKind AblationKind::resample(std::shared_ptr<const Dataset> reference,
                                    std::uint64_t seed) {
  if (!reference || reference->empty())
    throw ValidationError(
        "resample ablation needs a non-empty reference dataset");
  AblationKind k;
  k.kind = Kind::Resample;
  k.reference = std::move(reference);
  k.seed = seed;
  return k;
}

AblationKind AblationKind::patch(std::vector<double> x_patch) {
  AblationKind k;
  k.kind = Kind::Patch;
  k.x_patch = std::move(x_patch);
  return k;
}

AblationKind AblationKind::inject(double value) {
  if (!std::isfinite(value))
    throw ValidationError("inject ablation needs a finite value");
  AblationKind k;
  k.kind = Kind::Inject;
  k.value = value;
  return k;
}

const char* AblationKind::name() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Mean: return "mean";
    case Kind::Resample: return "resample";
    case Kind::Patch: return "patch";
    case Kind::Inject: return "inject";
  }
  return "?";
}

namespace {

std::uint64_t node_salt(const NodeRef& node) {
  return (static_cast<std::uint64_t>(node.kind) << 48) ^
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(node.layer))
          << 24) ^
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(node.index));
}

}  // namespace

double replacement_value(const NeuralNetwork& net,
                         const FeatureDictionary* dict,
                         const std::vector<double>& input,
                         const NodeRef& node, const AblationKind& kind) {
  switch (kind.kind) {
    case AblationKind::Kind::Zero:
      return 0.0;
    case AblationKind::Kind::Inject:
      return kind.value;
    case AblationKind::Kind::Patch: {
      if (kind.x_patch.size() != input.size())
        throw ValidationError("patch input shape mismatch");
      return forward(net, kind.x_patch, dict).at(node);
    }
    case AblationKind::Kind::Mean: {
      double sum = 0.0;
      for (const Example& ex : kind.reference->examples)
        sum += forward(net, ex.input, dict).at(node);
      return sum / static_cast<double>(kind.reference->size());
    }
    case AblationKind::Kind::Resample: {
      SplitMix64 rng(kind.seed ^ node_salt(node));
      std::size_t pick = rng.next_below(kind.reference->size());
      return forward(net, kind.reference->examples[pick].input, dict).at(node);
    }
  }
  throw ValidationError("bad ablation kind");
}

std::vector<double> replacement_table(const NeuralNetwork& net,
                                      const FeatureDictionary* dict,
                                      const std::vector<double>& input,
                                      const std::vector<NodeRef>& nodes,
                                      const AblationKind& kind) {
  std::vector<double> out;
  out.reserve(nodes.size());
  switch (kind.kind) {
    case AblationKind::Kind::Zero:
      out.assign(nodes.size(), 0.0);
      return out;
    case AblationKind::Kind::Inject:
      out.assign(nodes.size(), kind.value);
      return out;
    case AblationKind::Kind::Patch: {
      if (kind.x_patch.size() != input.size())
        throw ValidationError("patch input shape mismatch");
      ActivationTrace patch = forward(net, kind.x_patch, dict);
      for (const NodeRef& node : nodes) out.push_back(patch.at(node));
      return out;
    }
    case AblationKind::Kind::Mean: {
      out.assign(nodes.size(), 0.0);
      for (const Example& ex : kind.reference->examples) {
        ActivationTrace t = forward(net, ex.input, dict);
        for (std::size_t i = 0; i < nodes.size(); ++i) out[i] += t.at(nodes[i]);
      }
      for (double& v : out)
        v /= static_cast<double>(kind.reference->size());
      return out;
    }
    case AblationKind::Kind::Resample: {
      // One forward per distinct picked example.
      std::vector<std::size_t> picks(nodes.size());
      std::map<std::size_t, ActivationTrace> traces;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        SplitMix64 rng(kind.seed ^ node_salt(nodes[i]));
        picks[i] = rng.next_below(kind.reference->size());
        if (!traces.count(picks[i]))
          traces.emplace(picks[i],
                         forward(net, kind.reference->examples[picks[i]].input,
                                 dict));
      }
      for (std::size_t i = 0; i < nodes.size(); ++i)
        out.push_back(traces.at(picks[i]).at(nodes[i]));
      return out;
    }
  }
  throw ValidationError("bad ablation kind");
}

ActivationTrace forward_with_overrides(
    const NeuralNetwork& net, const FeatureDictionary* dict,
    const std::vector<double>& input,
    const std::vector<std::pair<NodeRef, double>>& overrides) {
  if (input.size() != net.input_width())
    throw ValidationError("input width " + std::to_string(input.size()) +
                          " does not match network input " +
                          std::to_string(net.input_width()));
  if (dict) dict->validate();

  auto override_for = [&](NodeRef::Kind kind, int layer,
                          int index) -> const double* {
    for (const auto& [node, v] : overrides) {
      if (node.kind != kind || node.index != index) continue;
      if (kind == NodeRef::Kind::Neuron && node.layer != layer) continue;
      return &v;
    }
    return nullptr;
  };

  ActivationTrace trace;
  trace.input = input;
  for (std::size_t j = 0; j < input.size(); ++j)
    if (const double* v =
            override_for(NodeRef::Kind::Input, 0, static_cast<int>(j)))
      trace.input[j] = *v;

  const std::vector<double>* current = &trace.input;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    std::vector<double> pre(layer.out_width);
    std::vector<double> post(layer.out_width);
    for (std::size_t i = 0; i < layer.out_width; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < layer.in_width; ++j)
        acc += layer.weight(i, j) * (*current)[j];
      acc += layer.bias[i];
      pre[i] = acc;
      post[i] = apply_activation(layer.activation, acc);
      if (const double* v = override_for(NodeRef::Kind::Neuron,
                                         static_cast<int>(l),
                                         static_cast<int>(i)))
        post[i] = *v;
    }
    trace.pre.push_back(std::move(pre));
    trace.post.push_back(std::move(post));
    if (dict && static_cast<int>(l) == dict->attach_layer) {
      trace.features = encode_features(*dict, trace.post.back());
      for (std::size_t t = 0; t < trace.features.size(); ++t)
        if (const double* v =
                override_for(NodeRef::Kind::Feature, 0, static_cast<int>(t)))
          trace.features[t] = *v;
      trace.reconstruction = decode_features(*dict, trace.features);
      current = &trace.reconstruction;
    } else {
      current = &trace.post.back();
    }
  }
  return trace;
}

ActivationTrace apply_ablation(const NeuralNetwork& net,
                               const FeatureDictionary* dict,
                               const std::vector<double>& input,
                               const NodeRef& node, const AblationKind& kind) {
  double r = replacement_value(net, dict, input, node, kind);
  return forward_with_overrides(net, dict, input, {{node, r}});
}

std::vector<NodeRef> mediators(const NeuralNetwork& net,
                               const FeatureDictionary* dict,
                               Granularity granularity) {
  if (granularity == Granularity::Features && !dict)
    throw ValidationError("feature granularity needs an attached dictionary");
  std::vector<NodeRef> out;
  for (std::size_t j = 0; j < net.input_width(); ++j)
    out.push_back(NodeRef::input(static_cast<int>(j)));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (granularity == Granularity::Features &&
        static_cast<int>(l) == dict->attach_layer) {
      for (std::size_t t = 0; t < dict->feature_count; ++t)
        out.push_back(NodeRef::feature(static_cast<int>(t)));
      continue;
    }
    for (std::size_t i = 0; i < net.layer(l).out_width; ++i)
      out.push_back(NodeRef::neuron(static_cast<int>(l), static_cast<int>(i)));
  }
  return out;
}

namespace {

// Mediator "levels": inputs at 0, layer l at l+1; features share their
// attach layer's level.
int level_of(const FeatureDictionary* dict, const NodeRef& node) {
  switch (node.kind) {
    case NodeRef::Kind::Input: return 0;
    case NodeRef::Kind::Neuron: return node.layer + 1;
    case NodeRef::Kind::Feature:
      if (!dict)
        throw ValidationError("feature node without an attached dictionary");
      return dict->attach_layer + 1;
  }
  return 0;
}

}  // namespace

std::vector<std::pair<NodeRef, NodeRef>> mediator_edges(
    const NeuralNetwork& net, const FeatureDictionary* dict,
    Granularity granularity) {
  std::vector<NodeRef> nodes = mediators(net, dict, granularity);
  std::vector<std::pair<NodeRef, NodeRef>> out;
  for (const NodeRef& up : nodes)
    for (const NodeRef& down : nodes)
      if (level_of(dict, down) == level_of(dict, up) + 1)
        out.emplace_back(up, down);
  return out;
}

bool precedes(const NeuralNetwork& net, const FeatureDictionary* dict,
              const NodeRef& up, const NodeRef& down) {
  (void)net;
  return level_of(dict, up) < level_of(dict, down);
}

}  // namespace causalprobe
