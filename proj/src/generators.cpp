#include "causalprobe/generators.hpp"

#include "causalprobe/rng.hpp"

namespace causalprobe {

namespace {

Layer dense(std::size_t in, std::size_t out, std::vector<double> weights,
            std::vector<double> bias, Activation act) {
  Layer l;
  l.in_width = in;
  l.out_width = out;
  l.weights = std::move(weights);
  l.bias = std::move(bias);
  l.activation = act;
  return l;
}

}  // namespace

GeneratedNet make_overdetermined_net() {
  GeneratedNet g;
  g.net = NeuralNetwork(
      2, {dense(2, 1, {6.0, 6.0}, {-3.0}, Activation::Logistic),
          dense(1, 1, {1.0}, {0.0}, Activation::Identity)});
  g.canonical_input = {1.0, 1.0};
  g.named_nodes = {{"A1", NodeRef::input(0)},
                   {"A2", NodeRef::input(1)},
                   {"B", NodeRef::neuron(0, 0)},
                   {"y", NodeRef::neuron(1, 0)}};
  g.candidates = {NodeRef::input(0), NodeRef::input(1)};
  g.epsilon = 0.4;
  g.description =
      "overdetermination: B = logistic(6*(A1+A2) - 3) saturates, so neither "
      "input moves y on its own";
  return g;
}

GeneratedNet make_preemption_net() {
  GeneratedNet g;
  // Rows: SH = relu(A1); BH = relu(-A1 + 0.5*A2).
  g.net = NeuralNetwork(
      2, {dense(2, 2, {1.0, 0.0, -1.0, 0.5}, {0.0, 0.0}, Activation::Relu),
          dense(2, 1, {1.0, 1.0}, {0.0}, Activation::Identity)});
  g.canonical_input = {1.0, 1.0};
  g.named_nodes = {{"A1", NodeRef::input(0)},
                   {"A2", NodeRef::input(1)},
                   {"SH", NodeRef::neuron(0, 0)},
                   {"BH", NodeRef::neuron(0, 1)},
                   {"y", NodeRef::neuron(1, 0)}};
  g.candidates = {NodeRef::input(0), NodeRef::input(1)};
  g.epsilon = 0.25;
  g.description =
      "preemption: A1 carries y and suppresses the backup path; the backup "
      "compensates at half strength once A1 is ablated";
  return g;
}

GeneratedNet make_nontransitive_net() {
  GeneratedNet g;
  // Layer 0: B = relu(A), ac = relu(A).
  // Layer 1 rows: t = relu(B - ac), Bc = relu(B), ac' = relu(ac).
  // Layer 2: y = -t + Bc - ac' + 1  (== OR(not A, B) on {0,1} inputs).
  g.net = NeuralNetwork(
      1, {dense(1, 2, {1.0, 1.0}, {0.0, 0.0}, Activation::Relu),
          dense(2, 3, {1.0, -1.0, 1.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 0.0},
                Activation::Relu),
          dense(3, 1, {-1.0, 1.0, -1.0}, {1.0}, Activation::Identity)});
  g.canonical_input = {1.0};
  g.named_nodes = {{"A", NodeRef::input(0)},
                   {"B", NodeRef::neuron(0, 0)},
                   {"y", NodeRef::neuron(2, 0)}};
  g.candidates = {NodeRef::input(0), NodeRef::neuron(0, 0)};
  g.epsilon = 0.25;
  g.description =
      "non-transitivity: y depends on B and B on A, yet y = OR(not A, B) "
      "leaves y independent of A end to end";
  return g;
}

Dataset make_succession_task(std::uint64_t seed) {
  Dataset data;
  for (int d1 = 0; d1 <= 8; ++d1)
    for (int d2 = d1 + 1; d2 <= 8; ++d2)
      for (int d3 = d2 + 1; d3 <= 8; ++d3) {
        Example ex;
        ex.input.assign(30, 0.0);
        ex.input[d1] = 1.0;
        ex.input[10 + d2] = 1.0;
        ex.input[20 + d3] = 1.0;
        ex.label = d3 + 1;
        data.examples.push_back(std::move(ex));
      }
  SplitMix64 rng(seed);
  for (std::size_t i = data.examples.size(); i > 1; --i)
    std::swap(data.examples[i - 1],
              data.examples[rng.next_below(i)]);
  return data;
}

NeuralNetwork make_succession_net(std::uint64_t seed) {
  return init_network(30, {32, 10},
                      {Activation::Relu, Activation::Identity}, seed);
}

namespace {

Scenario scenario(std::vector<Variable> vars,
                  std::vector<std::pair<std::string, std::string>> eqs,
                  std::vector<std::pair<std::string, Value>> context,
                  std::string description) {
  Scenario s;
  s.variables = std::move(vars);
  for (auto& [target, text] : eqs)
    s.equations.push_back(parse_equation(text, target));
  for (auto& [name, v] : context) s.context.set(name, std::move(v));
  s.description = std::move(description);
  return s;
}

}  // namespace

Scenario hiker_scenario() {
  return scenario(
      {{"A", Domain::boolean()}, {"B", Domain::boolean()},
       {"C", Domain::boolean()}},
      {{"B", "A"}, {"C", "not A or B"}},
      {{"A", Value(true)}},
      "hiker: boulder rolls (A), hiker ducks (B := A), hiker lives "
      "(C := not A or B)");
}

Scenario rocks_scenario() {
  return scenario(
      {{"A1", Domain::boolean()}, {"A2", Domain::boolean()},
       {"B", Domain::boolean()}},
      {{"B", "A1 or A2"}},
      {{"A1", Value(true)}, {"A2", Value(true)}},
      "rocks: Suzy (A1) and Billy (A2) both throw; the bottle shatters "
      "(B := A1 or A2)");
}

Scenario billiards_scenario() {
  return scenario(
      {{"A", Domain::boolean()}, {"B", Domain::boolean()},
       {"C", Domain::boolean()}},
      {{"B", "A"}, {"C", "B"}},
      {{"A", Value(true)}},
      "billiards: ball A strikes B (B := A), B sinks C (C := B)");
}

Scenario preemption_scenario() {
  return scenario(
      {{"A1", Domain::boolean()},
       {"A2", Domain::boolean()},
       {"SH", Domain::boolean()},
       {"BH", Domain::real_interval(0.0, 1.0)},
       {"B", Domain::real_interval(0.0, 2.0)}},
      {{"SH", "A1"}, {"BH", "relu(0.5*A2 - A1)"}, {"B", "SH + BH"}},
      {{"A1", Value(true)}, {"A2", Value(true)}},
      "preemption: Suzy's hit (SH := A1) suppresses Billy's (BH), which "
      "backs up at half strength once A1 is ablated");
}

}  // namespace causalprobe
