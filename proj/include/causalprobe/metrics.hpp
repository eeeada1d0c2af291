#ifndef CAUSALPROBE_METRICS_HPP
#define CAUSALPROBE_METRICS_HPP

#include <string>

#include "causalprobe/network.hpp"

namespace causalprobe {

// Scalar target metric y read off a trace.
//
// node_activation defaults to sign -1 (y = -activation), so that causes of
// the node carry positive effects in reports.
class TargetMetric {
 public:
  enum class Kind { LogitDifference, NegLogProb, NodeActivation };

  static TargetMetric logit_difference(int correct_index, int incorrect_index);
  static TargetMetric negative_log_probability(int target_index);
  static TargetMetric node_activation(NodeRef node, double sign = -1.0);

  Kind kind() const { return kind_; }
  int correct_index() const { return correct_; }
  int incorrect_index() const { return incorrect_; }
  int target_index() const { return target_; }
  const NodeRef& node() const { return node_; }
  double sign() const { return sign_; }

  // Validate indices/node against a network (+ optional dictionary).
  void validate(const NeuralNetwork& net, const FeatureDictionary* dict) const;

  double value(const ActivationTrace& trace) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::LogitDifference;
  int correct_ = 0, incorrect_ = 0;  // LogitDifference
  int target_ = 0;                   // NegLogProb
  NodeRef node_;                     // NodeActivation
  double sign_ = -1.0;
};

// Numerically stable log softmax probability of one output index.
double log_softmax_at(const std::vector<double>& logits, int index);

}  // namespace causalprobe

#endif
