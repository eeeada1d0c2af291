#include "causalprobe/autodiff.hpp"

#include <cmath>

#include "causalprobe/errors.hpp"

namespace causalprobe {

double GradientMap::at(const NodeRef& node) const {
  switch (node.kind) {
    case NodeRef::Kind::Input:
      return d_input.at(node.index);
    case NodeRef::Kind::Neuron:
      return d_post.at(node.layer).at(node.index);
    case NodeRef::Kind::Feature:
      return d_features.at(node.index);
  }
  throw ValidationError("bad node reference");
}

GradientMap backward(const NeuralNetwork& net, const ActivationTrace& trace,
                     const TargetMetric& metric,
                     const FeatureDictionary* dict) {
  metric.validate(net, dict);
  const int layer_count = static_cast<int>(net.layer_count());

  GradientMap g;
  g.d_input.assign(net.input_width(), 0.0);
  g.d_post.resize(layer_count);
  for (int l = 0; l < layer_count; ++l)
    g.d_post[l].assign(net.layer(l).out_width, 0.0);
  if (dict) g.d_features.assign(dict->feature_count, 0.0);

  // Seed the metric's direct derivative.
  switch (metric.kind()) {
    case TargetMetric::Kind::LogitDifference:
      g.d_post[layer_count - 1][metric.correct_index()] += 1.0;
      g.d_post[layer_count - 1][metric.incorrect_index()] -= 1.0;
      break;
    case TargetMetric::Kind::NegLogProb: {
      const std::vector<double>& out = trace.output();
      double max = out[0];
      for (double z : out) max = std::max(max, z);
      double sum = 0.0;
      for (double z : out) sum += std::exp(z - max);
      for (std::size_t j = 0; j < out.size(); ++j) {
        double p = std::exp(out[j] - max) / sum;
        g.d_post[layer_count - 1][j] +=
            p - (static_cast<int>(j) == metric.target_index() ? 1.0 : 0.0);
      }
      break;
    }
    case TargetMetric::Kind::NodeActivation: {
      const NodeRef& n = metric.node();
      switch (n.kind) {
        case NodeRef::Kind::Input: g.d_input[n.index] += metric.sign(); break;
        case NodeRef::Kind::Neuron:
          g.d_post[n.layer][n.index] += metric.sign();
          break;
        case NodeRef::Kind::Feature:
          g.d_features[n.index] += metric.sign();
          break;
      }
      break;
    }
  }

  for (int l = layer_count - 1; l >= 0; --l) {
    const Layer& layer = net.layer(l);

    // Fold the feature gradient into this layer's post-activations once
    // all downstream contributions have arrived.
    if (dict && l == dict->attach_layer) {
      for (std::size_t t = 0; t < dict->feature_count; ++t) {
        if (g.d_features[t] == 0.0) continue;
        double d_enc_pre =
            g.d_features[t] * (trace.features[t] > 0.0 ? 1.0 : 0.0);
        if (d_enc_pre == 0.0) continue;
        for (std::size_t j = 0; j < dict->width; ++j)
          g.d_post[l][j] += dict->w_encode[t * dict->width + j] * d_enc_pre;
      }
    }

    std::vector<double> d_pre(layer.out_width);
    for (std::size_t i = 0; i < layer.out_width; ++i)
      d_pre[i] = g.d_post[l][i] * activation_derivative(layer.activation,
                                                        trace.pre[l][i],
                                                        trace.post[l][i]);

    if (l == 0) {
      for (std::size_t i = 0; i < layer.out_width; ++i)
        for (std::size_t j = 0; j < layer.in_width; ++j)
          g.d_input[j] += layer.weight(i, j) * d_pre[i];
    } else if (dict && l - 1 == dict->attach_layer) {
      // Upstream is the dictionary reconstruction r = W_d f + b_d.
      std::vector<double> d_recon(dict->width, 0.0);
      for (std::size_t i = 0; i < layer.out_width; ++i)
        for (std::size_t j = 0; j < layer.in_width; ++j)
          d_recon[j] += layer.weight(i, j) * d_pre[i];
      for (std::size_t t = 0; t < dict->feature_count; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dict->width; ++j)
          acc += dict->w_decode[j * dict->feature_count + t] * d_recon[j];
        g.d_features[t] += acc;
      }
    } else {
      for (std::size_t i = 0; i < layer.out_width; ++i)
        for (std::size_t j = 0; j < layer.in_width; ++j)
          g.d_post[l - 1][j] += layer.weight(i, j) * d_pre[i];
    }
  }
  return g;
}

GradientMap backward_at(const NeuralNetwork& net,
                        const std::vector<double>& input,
                        const TargetMetric& metric,
                        const FeatureDictionary* dict) {
  ActivationTrace trace = forward(net, input, dict);
  return backward(net, trace, metric, dict);
}

}  // namespace causalprobe
