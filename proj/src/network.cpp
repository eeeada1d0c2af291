#include "causalprobe/network.hpp"

#include <cmath>

#include "causalprobe/errors.hpp"
#include "causalprobe/expr.hpp"

namespace causalprobe {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Logistic: return "logistic";
    case Activation::Tanh: return "tanh";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::Identity;
  if (name == "relu") return Activation::Relu;
  if (name == "logistic") return Activation::Logistic;
  if (name == "tanh") return Activation::Tanh;
  throw ValidationError("unknown activation '" + name + "'");
}

double apply_activation(Activation a, double x) {
  switch (a) {
    case Activation::Identity: return x;
    case Activation::Relu: return relu(x);
    case Activation::Logistic: return logistic(x);
    case Activation::Tanh: return std::tanh(x);
  }
  return x;
}

double activation_derivative(Activation a, double pre, double post) {
  switch (a) {
    case Activation::Identity: return 1.0;
    case Activation::Relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::Logistic: return post * (1.0 - post);
    case Activation::Tanh: return 1.0 - post * post;
  }
  return 1.0;
}

NeuralNetwork::NeuralNetwork(std::size_t input_width, std::vector<Layer> layers)
    : input_width_(input_width), layers_(std::move(layers)) {
  if (layers_.empty())
    throw ValidationError("network needs at least one layer");
  std::size_t prev = input_width_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.in_width != prev)
      throw ValidationError("layer " + std::to_string(l) + " expects input " +
                            std::to_string(layer.in_width) + ", previous is " +
                            std::to_string(prev));
    if (layer.weights.size() != layer.out_width * layer.in_width ||
        layer.bias.size() != layer.out_width)
      throw ValidationError("layer " + std::to_string(l) +
                            " has mismatched parameter shapes");
    for (double w : layer.weights)
      if (!std::isfinite(w))
        throw ValidationError("non-finite weight in layer " + std::to_string(l));
    for (double b : layer.bias)
      if (!std::isfinite(b))
        throw ValidationError("non-finite bias in layer " + std::to_string(l));
    prev = layer.out_width;
  }
}

std::size_t NeuralNetwork::output_width() const {
  return layers_.back().out_width;
}

NeuralNetwork init_network(std::size_t input_width,
                           const std::vector<std::size_t>& widths,
                           const std::vector<Activation>& activations,
                           std::uint64_t seed) {
  if (widths.size() != activations.size())
    throw ValidationError("widths and activations differ in length");
  SplitMix64 rng(seed);
  std::vector<Layer> layers;
  std::size_t in = input_width;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    Layer layer;
    layer.in_width = in;
    layer.out_width = widths[l];
    layer.activation = activations[l];
    layer.weights.resize(layer.out_width * layer.in_width);
    layer.bias.assign(layer.out_width, 0.0);
    double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (double& w : layer.weights) w = rng.next_in(-bound, bound);
    layers.push_back(std::move(layer));
    in = widths[l];
  }
  return NeuralNetwork(input_width, std::move(layers));
}

bool NodeRef::operator<(const NodeRef& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (kind == Kind::Neuron && layer != o.layer) return layer < o.layer;
  return index < o.index;
}

std::string NodeRef::name() const {
  switch (kind) {
    case Kind::Input: return "x" + std::to_string(index);
    case Kind::Neuron:
      return "n" + std::to_string(layer) + "_" + std::to_string(index);
    case Kind::Feature: return "f" + std::to_string(index);
  }
  return "?";
}

NodeRef NodeRef::parse(const std::string& name) {
  try {
    if (name.size() >= 2 && name[0] == 'x')
      return NodeRef::input(std::stoi(name.substr(1)));
    if (name.size() >= 2 && name[0] == 'f')
      return NodeRef::feature(std::stoi(name.substr(1)));
    if (name.size() >= 4 && name[0] == 'n') {
      auto sep = name.find('_');
      if (sep != std::string::npos)
        return NodeRef::neuron(std::stoi(name.substr(1, sep - 1)),
                               std::stoi(name.substr(sep + 1)));
    }
  } catch (const std::exception&) {
  }
  throw ValidationError("cannot parse node reference '" + name + "'");
}

void FeatureDictionary::validate() const {
  if (width == 0 || feature_count == 0)
    throw ValidationError("dictionary widths must be positive");
  if (w_encode.size() != feature_count * width ||
      b_encode.size() != feature_count ||
      w_decode.size() != width * feature_count || b_decode.size() != width)
    throw ValidationError("dictionary parameter shapes are inconsistent");
}

std::vector<double> encode_features(const FeatureDictionary& dict,
                                    const std::vector<double>& layer_output) {
  if (layer_output.size() != dict.width)
    throw ValidationError("dictionary expects width " +
                          std::to_string(dict.width) + ", got " +
                          std::to_string(layer_output.size()));
  std::vector<double> features(dict.feature_count);
  for (std::size_t i = 0; i < dict.feature_count; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dict.width; ++j)
      acc += dict.w_encode[i * dict.width + j] *
             (layer_output[j] - dict.b_decode[j]);
    acc += dict.b_encode[i];
    features[i] = relu(acc);
  }
  return features;
}

std::vector<double> decode_features(const FeatureDictionary& dict,
                                    const std::vector<double>& features) {
  if (features.size() != dict.feature_count)
    throw ValidationError("dictionary expects " +
                          std::to_string(dict.feature_count) + " features");
  std::vector<double> out(dict.width);
  for (std::size_t j = 0; j < dict.width; ++j) {
    double acc = 0.0;
    for (std::size_t t = 0; t < dict.feature_count; ++t)
      acc += dict.w_decode[j * dict.feature_count + t] * features[t];
    out[j] = acc + dict.b_decode[j];
  }
  return out;
}

FeatureDictionary identity_dictionary(int attach_layer, std::size_t width) {
  FeatureDictionary d;
  d.attach_layer = attach_layer;
  d.width = width;
  d.feature_count = width;
  d.w_encode.assign(width * width, 0.0);
  d.w_decode.assign(width * width, 0.0);
  for (std::size_t i = 0; i < width; ++i) {
    d.w_encode[i * width + i] = 1.0;
    d.w_decode[i * width + i] = 1.0;
  }
  d.b_encode.assign(width, 0.0);
  d.b_decode.assign(width, 0.0);
  return d;
}

double ActivationTrace::at(const NodeRef& node) const {
  switch (node.kind) {
    case NodeRef::Kind::Input:
      return input.at(node.index);
    case NodeRef::Kind::Neuron:
      return post.at(node.layer).at(node.index);
    case NodeRef::Kind::Feature:
      if (features.empty())
        throw ValidationError("no dictionary attached; feature " +
                              node.name() + " does not exist");
      return features.at(node.index);
  }
  throw ValidationError("bad node reference");
}

ActivationTrace forward(const NeuralNetwork& net,
                        const std::vector<double>& input,
                        const FeatureDictionary* dict) {
  if (input.size() != net.input_width())
    throw ValidationError("input width " + std::to_string(input.size()) +
                          " does not match network input " +
                          std::to_string(net.input_width()));
  if (dict) {
    dict->validate();
    if (dict->attach_layer < 0 ||
        dict->attach_layer >= static_cast<int>(net.layer_count()))
      throw ValidationError("dictionary attach layer out of range");
    if (dict->width != net.layer(dict->attach_layer).out_width)
      throw ValidationError("dictionary width does not match its layer");
  }

  ActivationTrace trace;
  trace.input = input;
  const std::vector<double>* current = &trace.input;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    std::vector<double> pre(layer.out_width);
    std::vector<double> post(layer.out_width);
    for (std::size_t i = 0; i < layer.out_width; ++i) {
      // Dot product in ascending index order, bias added last; the graph
      // compiler mirrors this exact operation order.
      double acc = 0.0;
      for (std::size_t j = 0; j < layer.in_width; ++j)
        acc += layer.weight(i, j) * (*current)[j];
      acc += layer.bias[i];
      pre[i] = acc;
      post[i] = apply_activation(layer.activation, acc);
    }
    trace.pre.push_back(std::move(pre));
    trace.post.push_back(std::move(post));
    if (dict && static_cast<int>(l) == dict->attach_layer) {
      trace.features = encode_features(*dict, trace.post.back());
      trace.reconstruction = decode_features(*dict, trace.features);
      current = &trace.reconstruction;
    } else {
      current = &trace.post.back();
    }
  }
  return trace;
}

}  // namespace causalprobe
