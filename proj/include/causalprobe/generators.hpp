#ifndef CAUSALPROBE_GENERATORS_HPP
#define CAUSALPROBE_GENERATORS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "causalprobe/network.hpp"
#include "causalprobe/scm.hpp"

namespace causalprobe {

// A generated toy network with its canonical analysis context.
struct GeneratedNet {
  NeuralNetwork net;
  std::vector<double> canonical_input;
  std::map<std::string, NodeRef> named_nodes;  // story name -> node
  std::vector<NodeRef> candidates;             // canonical ablation targets
  double epsilon = 0.25;                       // canonical search epsilon
  std::string description;
};

// Saturated-OR network: B = logistic(6*(A1 + A2) - 3), y = B, inputs
// A1 = A2 = 1. Each singleton zero ablation moves y by
// logistic(3) - logistic(9) (~0.047); the joint ablation by
// logistic(-3) - logistic(9) (~0.952). Canonical epsilon 0.4.
GeneratedNet make_overdetermined_net();

// Backup-with-partial-compensation network:
//   SH = relu(A1),  BH = relu(0.5*A2 - A1),  y = SH + BH,  A1 = A2 = 1.
// Ablating A1 alone drops y from 1 to 0.5 (the backup fires at half
// strength); ablating A2 alone changes nothing until A1 is gone.
// Canonical epsilon 0.25.
GeneratedNet make_preemption_net();

// Differentiable hiker story: B = A and y = OR(not A, B), built from relus
//   B = relu(A), ac = relu(A), t = relu(B - ac), Bc = relu(B)
//   y = 1 + Bc - ac - t
// Stepwise dependences (y on B, B on A) hold while y on A fails.
GeneratedNet make_nontransitive_net();

// Strictly increasing digit triples (d1 < d2 < d3 <= 8) as concatenated
// one-hots; label = d3 + 1. Deterministically shuffled by the seed.
Dataset make_succession_task(std::uint64_t seed);

// Fresh 30 -> 32 relu -> 10 identity network for the succession task.
NeuralNetwork make_succession_net(std::uint64_t seed);

// A boolean/real SCM with its canonical exogenous context.
struct Scenario {
  std::vector<Variable> variables;
  std::vector<StructuralEquation> equations;
  Assignment context;
  std::string description;
};

Scenario hiker_scenario();       // A;  B := A;  C := not A or B
Scenario rocks_scenario();       // A1, A2;  B := A1 or A2
Scenario billiards_scenario();   // A;  B := A;  C := B
Scenario preemption_scenario();  // SH := A1; BH := relu(0.5*A2 - A1); B := SH + BH

}  // namespace causalprobe

#endif
