#ifndef CAUSALPROBE_TEST_HELPERS_HPP
#define CAUSALPROBE_TEST_HELPERS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "causalprobe/ablation.hpp"
#include "causalprobe/ablation_search.hpp"
#include "causalprobe/generators.hpp"
#include "causalprobe/metrics.hpp"
#include "causalprobe/rng.hpp"
#include "causalprobe/scm.hpp"

namespace causalprobe::testing {

inline CausalGraph graph_of(const Scenario& s) {
  return build_graph(s.variables, s.equations);
}

inline CausalGraph hiker_graph() { return graph_of(hiker_scenario()); }
inline CausalGraph rocks_graph() { return graph_of(rocks_scenario()); }
inline CausalGraph billiards_graph() { return graph_of(billiards_scenario()); }

inline Assignment bool_context(
    std::initializer_list<std::pair<const char*, bool>> values) {
  Assignment a;
  for (const auto& [name, v] : values) a.set(name, Value(v));
  return a;
}

// Reference logistic, written out locally so frozen expectations do not
// route through the library.
inline double ref_logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Random boolean SCM: `exo` exogenous variables and `endo` endogenous
// ones, each endogenous equation a random and/or/not/xor-ish formula over
// earlier variables.
inline CausalGraph random_bool_graph(SplitMix64& rng, int exo, int endo) {
  std::vector<Variable> vars;
  std::vector<StructuralEquation> eqs;
  std::vector<std::string> names;
  for (int i = 0; i < exo; ++i) {
    names.push_back("u" + std::to_string(i));
    vars.push_back({names.back(), Domain::boolean()});
  }
  for (int i = 0; i < endo; ++i) {
    std::string name = "v" + std::to_string(i);
    // Two distinct earlier variables (or one, negated).
    std::size_t a = rng.next_below(names.size());
    std::size_t b = rng.next_below(names.size());
    std::string ea = names[a];
    std::string eb = names[b];
    std::string body;
    switch (rng.next_below(6)) {
      case 0: body = ea + " and " + eb; break;
      case 1: body = ea + " or " + eb; break;
      case 2: body = "not " + ea; break;
      case 3: body = ea + " != " + eb; break;  // xor
      case 4: body = ea + " and not " + eb; break;
      default: body = ea + " or not " + eb; break;
    }
    vars.push_back({name, Domain::boolean()});
    eqs.push_back(parse_equation(body, name));
    names.push_back(name);
  }
  return build_graph(std::move(vars), std::move(eqs));
}

// Random exogenous assignment for a finite graph.
inline Assignment random_exogenous(const CausalGraph& g, SplitMix64& rng) {
  Assignment a;
  for (const std::string& name : g.exogenous_names()) {
    auto values = g.variable(name).domain.enumerate();
    a.set(name, values[rng.next_below(values.size())]);
  }
  return a;
}

// Random small dense network; activations drawn from the given pool.
inline NeuralNetwork random_net(SplitMix64& rng, std::size_t max_width = 8,
                                std::size_t max_depth = 4,
                                std::vector<Activation> pool = {
                                    Activation::Identity, Activation::Relu,
                                    Activation::Logistic, Activation::Tanh}) {
  std::size_t input = 1 + rng.next_below(max_width);
  std::size_t depth = 1 + rng.next_below(max_depth);
  std::vector<std::size_t> widths;
  std::vector<Activation> acts;
  for (std::size_t l = 0; l < depth; ++l) {
    widths.push_back(1 + rng.next_below(max_width));
    acts.push_back(pool[rng.next_below(pool.size())]);
  }
  return init_network(input, widths, acts, rng.next());
}

inline std::vector<double> random_input(SplitMix64& rng, std::size_t width) {
  std::vector<double> x(width);
  for (double& v : x) v = rng.next_in(-1.0, 1.0);
  return x;
}

// True when any relu pre-activation sits within `margin` of its kink,
// where finite differences are unreliable.
inline bool near_relu_kink(const NeuralNetwork& net,
                           const ActivationTrace& trace, double margin) {
  for (std::size_t l = 0; l < net.layer_count(); ++l)
    if (net.layer(l).activation == Activation::Relu)
      for (double pre : trace.pre[l])
        if (std::abs(pre) < margin) return true;
  return false;
}

// Central-difference derivative of the metric with respect to one node's
// post-activation, recomputing downstream through the override path.
inline double fd_gradient(const NeuralNetwork& net,
                          const FeatureDictionary* dict,
                          const std::vector<double>& input,
                          const NodeRef& node, const TargetMetric& metric,
                          double h = 1e-5) {
  ActivationTrace base = forward(net, input, dict);
  double a = base.at(node);
  double up = metric.value(
      forward_with_overrides(net, dict, input, {{node, a + h}}));
  double down = metric.value(
      forward_with_overrides(net, dict, input, {{node, a - h}}));
  return (up - down) / (2.0 * h);
}

// Naive independent oracle for inclusion-minimal ablation sets: evaluate
// every subset of size <= k_max, keep those whose joint |delta| exceeds
// epsilon and that contain no qualifying proper subset.
inline std::vector<std::vector<std::string>> naive_minimal_sets(
    const AblationSystem& system, double epsilon, std::size_t k_max) {
  const std::size_t n = system.candidate_count();
  const double baseline = system.metric(std::vector<bool>(n, false));

  std::vector<std::vector<bool>> qualifying;
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
    std::size_t size = 0;
    std::vector<bool> mask(n, false);
    for (std::size_t i = 0; i < n; ++i)
      if (bits & (std::uint64_t{1} << i)) {
        mask[i] = true;
        ++size;
      }
    if (size > k_max) continue;
    if (std::abs(system.metric(mask) - baseline) > epsilon)
      qualifying.push_back(std::move(mask));
  }

  std::vector<std::vector<std::string>> minimal;
  for (const auto& mask : qualifying) {
    bool has_subset = false;
    for (const auto& other : qualifying) {
      if (&other == &mask) continue;
      bool subset = true, proper = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (other[i] && !mask[i]) subset = false;
        if (mask[i] && !other[i]) proper = true;
      }
      if (subset && proper) {
        has_subset = true;
        break;
      }
    }
    if (!has_subset) {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < n; ++i)
        if (mask[i]) names.push_back(system.candidate_name(i));
      minimal.push_back(std::move(names));
    }
  }
  return minimal;
}

}  // namespace causalprobe::testing

#endif
