#include "causalprobe/train.hpp"

#include <algorithm>
#include <cmath>

#include "causalprobe/errors.hpp"
#include "causalprobe/metrics.hpp"
#include "causalprobe/rng.hpp"

namespace causalprobe {

namespace {

void softmax_into(const std::vector<double>& logits, std::vector<double>& p) {
  double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  p.resize(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) {
    p[j] = std::exp(logits[j] - max);
    sum += p[j];
  }
  for (double& v : p) v /= sum;
}

}  // namespace

double cross_entropy_loss(const NeuralNetwork& net, const Dataset& dataset) {
  if (dataset.empty()) throw ValidationError("dataset is empty");
  double total = 0.0;
  for (const Example& ex : dataset.examples) {
    ActivationTrace t = forward(net, ex.input);
    total -= log_softmax_at(t.output(), ex.label);
  }
  return total / static_cast<double>(dataset.size());
}

double classification_accuracy(const NeuralNetwork& net,
                               const Dataset& dataset) {
  if (dataset.empty()) throw ValidationError("dataset is empty");
  std::size_t hits = 0;
  for (const Example& ex : dataset.examples) {
    ActivationTrace t = forward(net, ex.input);
    const std::vector<double>& out = t.output();
    std::size_t argmax =
        std::max_element(out.begin(), out.end()) - out.begin();
    if (static_cast<int>(argmax) == ex.label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

TrainResult train(const NeuralNetwork& net, const Dataset& dataset,
                  std::size_t steps, double learning_rate,
                  std::uint64_t seed) {
  if (dataset.empty()) throw ValidationError("training dataset is empty");
  for (const Example& ex : dataset.examples) {
    if (ex.input.size() != net.input_width())
      throw ValidationError("example input width mismatch");
    if (ex.label < 0 || ex.label >= static_cast<int>(net.output_width()))
      throw ValidationError("example label outside output width");
  }

  // Fix the gradient summation order once, from the seed.
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  SplitMix64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next_below(i)]);

  TrainResult result;
  result.net = net;
  NeuralNetwork& model = result.net;
  const std::size_t layer_count = model.layer_count();
  const double inv_n = 1.0 / static_cast<double>(dataset.size());

  std::vector<std::vector<double>> grad_w(layer_count), grad_b(layer_count);
  std::vector<double> p;

  for (std::size_t step = 0; step < steps; ++step) {
    for (std::size_t l = 0; l < layer_count; ++l) {
      grad_w[l].assign(model.layer(l).weights.size(), 0.0);
      grad_b[l].assign(model.layer(l).bias.size(), 0.0);
    }

    double loss = 0.0;
    for (std::size_t idx : order) {
      const Example& ex = dataset.examples[idx];
      ActivationTrace trace = forward(model, ex.input);
      double lp = log_softmax_at(trace.output(), ex.label);
      loss -= lp;

      softmax_into(trace.output(), p);
      std::vector<double> d_post = p;
      d_post[ex.label] -= 1.0;

      for (std::size_t li = layer_count; li-- > 0;) {
        const Layer& layer = model.layer(li);
        std::vector<double> d_pre(layer.out_width);
        for (std::size_t i = 0; i < layer.out_width; ++i)
          d_pre[i] = d_post[i] * activation_derivative(layer.activation,
                                                       trace.pre[li][i],
                                                       trace.post[li][i]);
        const std::vector<double>& below =
            li == 0 ? trace.input : trace.post[li - 1];
        for (std::size_t i = 0; i < layer.out_width; ++i) {
          grad_b[li][i] += d_pre[i];
          for (std::size_t j = 0; j < layer.in_width; ++j)
            grad_w[li][i * layer.in_width + j] += d_pre[i] * below[j];
        }
        if (li == 0) break;
        std::vector<double> d_below(layer.in_width, 0.0);
        for (std::size_t i = 0; i < layer.out_width; ++i)
          for (std::size_t j = 0; j < layer.in_width; ++j)
            d_below[j] += layer.weight(i, j) * d_pre[i];
        d_post = std::move(d_below);
      }
    }

    loss *= inv_n;
    if (!std::isfinite(loss)) throw DivergenceError(step);

    for (std::size_t l = 0; l < layer_count; ++l) {
      Layer& layer = model.mutable_layer(l);
      for (std::size_t k = 0; k < layer.weights.size(); ++k)
        layer.weights[k] -= learning_rate * grad_w[l][k] * inv_n;
      for (std::size_t k = 0; k < layer.bias.size(); ++k)
        layer.bias[k] -= learning_rate * grad_b[l][k] * inv_n;
    }
    result.steps_run = step + 1;
  }

  result.final_loss = cross_entropy_loss(model, dataset);
  result.accuracy = classification_accuracy(model, dataset);
  return result;
}

}  // namespace causalprobe
