#ifndef CAUSALPROBE_TRAIN_HPP
#define CAUSALPROBE_TRAIN_HPP

#include <cstdint>

#include "causalprobe/network.hpp"

namespace causalprobe {

struct TrainResult {
  NeuralNetwork net;
  double final_loss = 0.0;  // mean cross-entropy on the training set
  double accuracy = 0.0;    // argmax accuracy on the training set
  std::size_t steps_run = 0;
};

// Plain full-batch gradient descent on mean cross-entropy, fixed update
// order. The seed permutes the example order once up front (fixing the
// gradient summation order); steps = 0 returns the network unchanged.
// Throws DivergenceError when the loss goes non-finite.
TrainResult train(const NeuralNetwork& net, const Dataset& dataset,
                  std::size_t steps, double learning_rate,
                  std::uint64_t seed);

// Mean cross-entropy of the network on a dataset.
double cross_entropy_loss(const NeuralNetwork& net, const Dataset& dataset);

// Fraction of examples whose argmax output matches the label.
double classification_accuracy(const NeuralNetwork& net,
                               const Dataset& dataset);

}  // namespace causalprobe

#endif
