#include <doctest.h>

#include "causalprobe/effects.hpp"
#include "causalprobe/errors.hpp"
#include "causalprobe/train.hpp"
#include "test_helpers.hpp"

using namespace causalprobe;
using namespace causalprobe::testing;

namespace {

double output_of(const GeneratedNet& g, std::vector<double> input) {
  return forward(g.net, input).output()[0];
}

double joint_ablation_delta(const GeneratedNet& g,
                            const std::vector<NodeRef>& nodes) {
  std::vector<std::pair<NodeRef, double>> overrides;
  for (const NodeRef& n : nodes) overrides.emplace_back(n, 0.0);
  double base = forward(g.net, g.canonical_input).output()[0];
  double ablated =
      forward_with_overrides(g.net, nullptr, g.canonical_input, overrides)
          .output()[0];
  return ablated - base;
}

}  // namespace

TEST_CASE("overdetermined net: singleton deltas small, joint delta large") {
  GeneratedNet g = make_overdetermined_net();
  CHECK(output_of(g, {1, 1}) == doctest::Approx(ref_logistic(9)).epsilon(1e-15));

  double single_a1 = joint_ablation_delta(g, {g.named_nodes.at("A1")});
  double single_a2 = joint_ablation_delta(g, {g.named_nodes.at("A2")});
  double joint = joint_ablation_delta(
      g, {g.named_nodes.at("A1"), g.named_nodes.at("A2")});

  CHECK(single_a1 ==
        doctest::Approx(ref_logistic(3) - ref_logistic(9)).epsilon(1e-12));
  CHECK(std::abs(single_a1) == doctest::Approx(0.0473024786).epsilon(1e-7));
  CHECK(single_a1 == single_a2);  // weight symmetry, identical arithmetic
  CHECK(joint ==
        doctest::Approx(ref_logistic(-3) - ref_logistic(9)).epsilon(1e-12));
  CHECK(std::abs(joint) == doctest::Approx(0.9524507322).epsilon(1e-7));

  // Only the pair exceeds the canonical epsilon.
  CHECK(std::abs(single_a1) < g.epsilon);
  CHECK(std::abs(joint) > g.epsilon);
}

TEST_CASE("preemption net: planted asymmetry between primary and backup") {
  GeneratedNet g = make_preemption_net();
  CHECK(output_of(g, {1, 1}) == 1.0);

  // Ablating the backup input alone changes nothing.
  CHECK(joint_ablation_delta(g, {g.named_nodes.at("A2")}) == 0.0);
  // Ablating the primary drops y to the backup's half-strength response.
  CHECK(joint_ablation_delta(g, {g.named_nodes.at("A1")}) ==
        doctest::Approx(-0.5));
  // Ablating both kills y.
  CHECK(joint_ablation_delta(
            g, {g.named_nodes.at("A1"), g.named_nodes.at("A2")}) ==
        doctest::Approx(-1.0));
}

TEST_CASE("preemption net rounds: {A1}, then {A2}, then fixpoint") {
  GeneratedNet g = make_preemption_net();
  NetworkAblationSystem sys(
      g.net, nullptr, {g.canonical_input}, g.candidates, AblationKind::zero(),
      TargetMetric::node_activation(g.named_nodes.at("y"), +1.0));
  PreemptionReport r = detect_preemption(sys, g.epsilon, 4);
  REQUIRE(r.rounds.size() == 3);
  CHECK(r.rounds[0].discovered == std::vector<std::string>{"x0"});
  CHECK(r.rounds[1].discovered == std::vector<std::string>{"x1"});
  CHECK(r.rounds[2].discovered.empty());
}

TEST_CASE("nontransitive net: stepwise dependences hold, end-to-end fails") {
  GeneratedNet g = make_nontransitive_net();
  NodeRef a = g.named_nodes.at("A");
  NodeRef b = g.named_nodes.at("B");
  NodeRef y = g.named_nodes.at("y");
  TargetMetric y_metric = TargetMetric::node_activation(y, +1.0);
  TargetMetric b_metric = TargetMetric::node_activation(b, +1.0);

  CHECK(output_of(g, {1}) == 1.0);
  CHECK(output_of(g, {0}) == 1.0);

  double y_on_b = indirect_effect_exact(g.net, nullptr, g.canonical_input, b,
                                        AblationKind::zero(), y_metric);
  double b_on_a = indirect_effect_exact(g.net, nullptr, g.canonical_input, a,
                                        AblationKind::zero(), b_metric);
  double y_on_a = indirect_effect_exact(g.net, nullptr, g.canonical_input, a,
                                        AblationKind::zero(), y_metric);
  CHECK(std::abs(y_on_b) > g.epsilon);
  CHECK(std::abs(b_on_a) > g.epsilon);
  CHECK(std::abs(y_on_a) <= g.epsilon);
  CHECK(y_on_a == 0.0);
}

TEST_CASE("succession task: contents, labels, determinism") {
  Dataset d = make_succession_task(7);
  CHECK(d.size() == 84);  // strictly increasing triples over digits 0..8

  bool saw_123 = false, saw_567 = false;
  for (const Example& ex : d.examples) {
    REQUIRE(ex.input.size() == 30);
    int d1 = -1, d2 = -1, d3 = -1;
    for (int i = 0; i < 10; ++i) {
      if (ex.input[i] == 1.0) d1 = i;
      if (ex.input[10 + i] == 1.0) d2 = i;
      if (ex.input[20 + i] == 1.0) d3 = i;
    }
    CHECK(d1 < d2);
    CHECK(d2 < d3);
    CHECK(d3 <= 8);
    CHECK(ex.label == d3 + 1);
    if (d1 == 1 && d2 == 2 && d3 == 3) {
      saw_123 = true;
      CHECK(ex.label == 4);
    }
    if (d1 == 5 && d2 == 6 && d3 == 7) {
      saw_567 = true;
      CHECK(ex.label == 8);
    }
  }
  CHECK(saw_123);
  CHECK(saw_567);

  Dataset again = make_succession_task(7);
  REQUIRE(again.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(again.examples[i].input == d.examples[i].input);
    CHECK(again.examples[i].label == d.examples[i].label);
  }
  Dataset other = make_succession_task(8);
  bool different = false;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (other.examples[i].input != d.examples[i].input) different = true;
  CHECK(different);
}

TEST_CASE("train with steps=0 returns bit-identical parameters") {
  NeuralNetwork net = make_succession_net(3);
  Dataset data = make_succession_task(3);
  TrainResult r = train(net, data, 0, 0.1, 3);
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    CHECK(r.net.layer(l).weights == net.layer(l).weights);
    CHECK(r.net.layer(l).bias == net.layer(l).bias);
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  NeuralNetwork net = make_succession_net(11);
  Dataset data = make_succession_task(11);
  TrainResult a = train(net, data, 50, 0.1, 11);
  TrainResult b = train(net, data, 50, 0.1, 11);
  for (std::size_t l = 0; l < net.layer_count(); ++l)
    CHECK(a.net.layer(l).weights == b.net.layer(l).weights);
  CHECK(a.final_loss == b.final_loss);
}

TEST_CASE("training reduces the loss on the succession task") {
  NeuralNetwork net = make_succession_net(5);
  Dataset data = make_succession_task(5);
  double before = cross_entropy_loss(net, data);
  TrainResult r = train(net, data, 300, 0.5, 5);
  CHECK(r.final_loss < before);
  CHECK(r.steps_run == 300);
}

TEST_CASE("weight initialization is seed-deterministic and bounded") {
  NeuralNetwork a = init_network(4, {3}, {Activation::Relu}, 99);
  NeuralNetwork b = init_network(4, {3}, {Activation::Relu}, 99);
  CHECK(a.layer(0).weights == b.layer(0).weights);
  double bound = 1.0 / std::sqrt(4.0);
  for (double w : a.layer(0).weights) {
    CHECK(w >= -bound);
    CHECK(w <= bound);
  }
  NeuralNetwork c = init_network(4, {3}, {Activation::Relu}, 100);
  CHECK(a.layer(0).weights != c.layer(0).weights);
}
