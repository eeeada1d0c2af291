#ifndef CAUSALPROBE_NETWORK_HPP
#define CAUSALPROBE_NETWORK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalprobe/rng.hpp"

namespace causalprobe {

enum class Activation { Identity, Relu, Logistic, Tanh };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

double apply_activation(Activation a, double x);
// Derivative given pre- and post-activation (relu uses subgradient 0 at 0).
double activation_derivative(Activation a, double pre, double post);

// Dense layer, weights row-major (out x in), all parameters finite.
struct Layer {
  std::size_t out_width = 0;
  std::size_t in_width = 0;
  std::vector<double> weights;  // out_width * in_width
  std::vector<double> bias;     // out_width
  Activation activation = Activation::Identity;

  double weight(std::size_t row, std::size_t col) const {
    return weights[row * in_width + col];
  }
  double& weight(std::size_t row, std::size_t col) {
    return weights[row * in_width + col];
  }
};

// Layered dense network over 64-bit floats. Immutable by convention after
// construction; forward/backward are pure.
class NeuralNetwork {
 public:
  NeuralNetwork() = default;
  NeuralNetwork(std::size_t input_width, std::vector<Layer> layers);

  std::size_t input_width() const { return input_width_; }
  std::size_t output_width() const;
  std::size_t layer_count() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return layers_[i]; }
  const std::vector<Layer>& layers() const { return layers_; }
  Layer& mutable_layer(std::size_t i) { return layers_[i]; }

 private:
  std::size_t input_width_ = 0;
  std::vector<Layer> layers_;
};

// Fresh network with uniform [-1/sqrt(fan_in), +1/sqrt(fan_in)] weights
// and zero biases from an explicit seed.
NeuralNetwork init_network(std::size_t input_width,
                           const std::vector<std::size_t>& widths,
                           const std::vector<Activation>& activations,
                           std::uint64_t seed);

// Reference to a mediator: an input coordinate, a neuron's
// post-activation, or a sparse feature (when a dictionary is attached).
struct NodeRef {
  enum class Kind { Input, Neuron, Feature };
  Kind kind = Kind::Neuron;
  int layer = 0;  // Kind::Neuron only
  int index = 0;

  static NodeRef input(int i) { return {Kind::Input, 0, i}; }
  static NodeRef neuron(int layer, int i) { return {Kind::Neuron, layer, i}; }
  static NodeRef feature(int i) { return {Kind::Feature, 0, i}; }

  bool operator==(const NodeRef& o) const {
    return kind == o.kind && index == o.index &&
           (kind != Kind::Neuron || layer == o.layer);
  }
  bool operator<(const NodeRef& o) const;

  std::string name() const;               // "x0", "n1_2", "f3"
  static NodeRef parse(const std::string& name);
};

// Sparse feature dictionary attached after one layer's output:
//   f = relu(W_e (x - b_d) + b_e),  reconstruction  r = W_d f + b_d.
// Downstream layers consume the reconstruction.
struct FeatureDictionary {
  int attach_layer = 0;           // index of the layer whose output is encoded
  std::size_t width = 0;          // that layer's width
  std::size_t feature_count = 0;  // may exceed width (overcomplete)
  std::vector<double> w_encode;   // feature_count x width, row-major
  std::vector<double> b_encode;   // feature_count
  std::vector<double> w_decode;   // width x feature_count, row-major
  std::vector<double> b_decode;   // width

  void validate() const;
};

std::vector<double> encode_features(const FeatureDictionary& dict,
                                    const std::vector<double>& layer_output);
std::vector<double> decode_features(const FeatureDictionary& dict,
                                    const std::vector<double>& features);

// Identity square dictionary (exactly invertible on nonnegative inputs).
FeatureDictionary identity_dictionary(int attach_layer, std::size_t width);

// Per-layer pre- and post-activations for one input; recomputing from the
// stored input reproduces the trace bit-for-bit.
struct ActivationTrace {
  std::vector<double> input;
  std::vector<std::vector<double>> pre;    // per layer
  std::vector<std::vector<double>> post;   // per layer
  std::vector<double> features;            // dictionary attached only
  std::vector<double> reconstruction;      // dictionary attached only

  const std::vector<double>& output() const { return post.back(); }
  double at(const NodeRef& node) const;
};

ActivationTrace forward(const NeuralNetwork& net,
                        const std::vector<double>& input,
                        const FeatureDictionary* dict = nullptr);

// One labelled example and a dataset of them.
struct Example {
  std::vector<double> input;
  int label = 0;
};

struct Dataset {
  std::vector<Example> examples;

  bool empty() const { return examples.empty(); }
  std::size_t size() const { return examples.size(); }
};

}  // namespace causalprobe

#endif
