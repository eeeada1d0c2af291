#include "causalprobe/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "causalprobe/errors.hpp"
#include "causalprobe/value.hpp"

namespace causalprobe {

TargetMetric TargetMetric::logit_difference(int correct_index,
                                            int incorrect_index) {
  TargetMetric m;
  m.kind_ = Kind::LogitDifference;
  m.correct_ = correct_index;
  m.incorrect_ = incorrect_index;
  return m;
}

TargetMetric TargetMetric::negative_log_probability(int target_index) {
  TargetMetric m;
  m.kind_ = Kind::NegLogProb;
  m.target_ = target_index;
  return m;
}

TargetMetric TargetMetric::node_activation(NodeRef node, double sign) {
  TargetMetric m;
  m.kind_ = Kind::NodeActivation;
  m.node_ = node;
  m.sign_ = sign;
  return m;
}

void TargetMetric::validate(const NeuralNetwork& net,
                            const FeatureDictionary* dict) const {
  const int out = static_cast<int>(net.output_width());
  switch (kind_) {
    case Kind::LogitDifference:
      if (correct_ < 0 || correct_ >= out || incorrect_ < 0 ||
          incorrect_ >= out)
        throw ValidationError("logit_difference indices outside output width");
      return;
    case Kind::NegLogProb:
      if (target_ < 0 || target_ >= out)
        throw ValidationError("negative_log_probability index outside output");
      return;
    case Kind::NodeActivation:
      switch (node_.kind) {
        case NodeRef::Kind::Input:
          if (node_.index < 0 ||
              node_.index >= static_cast<int>(net.input_width()))
            throw ValidationError("metric node " + node_.name() +
                                  " outside input width");
          return;
        case NodeRef::Kind::Neuron:
          if (node_.layer < 0 ||
              node_.layer >= static_cast<int>(net.layer_count()) ||
              node_.index < 0 ||
              node_.index >=
                  static_cast<int>(net.layer(node_.layer).out_width))
            throw ValidationError("metric node " + node_.name() +
                                  " does not exist");
          return;
        case NodeRef::Kind::Feature:
          if (!dict || node_.index < 0 ||
              node_.index >= static_cast<int>(dict->feature_count))
            throw ValidationError("metric feature " + node_.name() +
                                  " does not exist");
          return;
      }
  }
}

double log_softmax_at(const std::vector<double>& logits, int index) {
  double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - max);
  return logits[index] - max - std::log(sum);
}

double TargetMetric::value(const ActivationTrace& trace) const {
  switch (kind_) {
    case Kind::LogitDifference:
      return trace.output()[correct_] - trace.output()[incorrect_];
    case Kind::NegLogProb: {
      double lp = log_softmax_at(trace.output(), target_);
      if (!std::isfinite(lp))
        throw EvalError("negative log probability is undefined (zero mass)");
      return -lp;
    }
    case Kind::NodeActivation:
      return sign_ * trace.at(node_);
  }
  throw EvalError("bad metric");
}

std::string TargetMetric::describe() const {
  switch (kind_) {
    case Kind::LogitDifference:
      return "logit_difference(" + std::to_string(correct_) + ", " +
             std::to_string(incorrect_) + ")";
    case Kind::NegLogProb:
      return "negative_log_probability(" + std::to_string(target_) + ")";
    case Kind::NodeActivation:
      return "node_activation(" + node_.name() +
             ", sign=" + format_real(sign_) + ")";
  }
  return "?";
}

}  // namespace causalprobe
