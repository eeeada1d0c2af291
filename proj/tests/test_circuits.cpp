#include <doctest.h>

#include <set>

#include "causalprobe/circuit.hpp"
#include "causalprobe/circuit_export.hpp"
#include "causalprobe/errors.hpp"
#include "test_helpers.hpp"

using namespace causalprobe;
using namespace causalprobe::testing;

namespace {

Dataset single(const std::vector<double>& input) {
  Dataset d;
  d.examples.push_back({input, 0});
  return d;
}

TargetMetric y_of(const GeneratedNet& g) {
  return TargetMetric::node_activation(g.named_nodes.at("y"), +1.0);
}

std::set<std::string> node_names(const Circuit& c) {
  std::set<std::string> out;
  for (const CircuitNode& n : c.nodes) out.insert(n.name);
  return out;
}

}  // namespace

TEST_CASE("defaults carry T_N = 0.4 and T_E = 0.04") {
  DiscoveryOptions options;
  CHECK(options.t_n == 0.4);
  CHECK(options.t_e == 0.04);
}

TEST_CASE("saturating net at default thresholds keeps B but misses the inputs") {
  GeneratedNet g = make_overdetermined_net();
  Circuit c = discover_circuit(g.net, nullptr, single(g.canonical_input),
                               y_of(g), DiscoveryOptions{});
  CHECK(c.has_node("n0_0"));       // B
  CHECK_FALSE(c.has_node("x0"));   // A1, |IE| ~ 0.047 < 0.4
  CHECK_FALSE(c.has_node("x1"));   // A2
}

TEST_CASE("T_N = 0 admits every node with a nonzero effect") {
  GeneratedNet g = make_overdetermined_net();
  DiscoveryOptions options;
  options.t_n = 0.0;
  options.t_e = 0.0;
  Circuit c = discover_circuit(g.net, nullptr, single(g.canonical_input),
                               y_of(g), options);
  CHECK(c.has_node("x0"));
  CHECK(c.has_node("x1"));
  CHECK(c.has_node("n0_0"));
  CHECK(c.has_node("n1_0"));
}

TEST_CASE("edge attribution equals the IE against the downstream activation") {
  GeneratedNet g = make_overdetermined_net();
  NodeRef a1 = g.named_nodes.at("A1");
  NodeRef b = g.named_nodes.at("B");
  double edge = edge_attribution(g.net, nullptr, g.canonical_input, a1, b,
                                 Estimator::exact(), AblationKind::zero());
  double ie = indirect_effect_exact(g.net, nullptr, g.canonical_input, a1,
                                    AblationKind::zero(),
                                    TargetMetric::node_activation(b));
  CHECK(edge == ie);
  CHECK_THROWS_AS(edge_attribution(g.net, nullptr, g.canonical_input, b, a1,
                                   Estimator::exact(), AblationKind::zero()),
                  ValidationError);
}

TEST_CASE("unconnected pairs score zero") {
  Layer l1{2, 1, {1.0, 0.0}, {0, 0}, Activation::Identity};
  Layer l2{1, 2, {0.0, 1.0}, {0}, Activation::Identity};
  NeuralNetwork net(1, {l1, l2});
  double e = edge_attribution(net, nullptr, {1.0}, NodeRef::neuron(0, 0),
                              NodeRef::neuron(1, 0), Estimator::exact(),
                              AblationKind::zero());
  CHECK(e == 0.0);
}

TEST_CASE("hiker net: the A->B edge is strong while A's output effect is zero") {
  GeneratedNet g = make_nontransitive_net();
  NodeRef a = g.named_nodes.at("A");
  NodeRef b = g.named_nodes.at("B");
  double edge = edge_attribution(g.net, nullptr, g.canonical_input, a, b,
                                 Estimator::exact(), AblationKind::zero());
  double node = indirect_effect_exact(g.net, nullptr, g.canonical_input, a,
                                      AblationKind::zero(), y_of(g));
  CHECK(std::abs(edge) == doctest::Approx(1.0));
  CHECK(node == 0.0);
}

TEST_CASE("local expansion anchored at B pulls A in with a mark") {
  GeneratedNet g = make_nontransitive_net();
  Circuit c = discover_circuit(g.net, nullptr, single(g.canonical_input),
                               y_of(g), DiscoveryOptions{});
  REQUIRE(c.has_node("n0_0"));   // B
  CHECK_FALSE(c.has_node("x0"));  // A misses the output threshold

  Circuit expanded = expand_local_dependencies(
      g.net, nullptr, c, "n0_0", single(g.canonical_input), 0.4,
      Estimator::exact(), AblationKind::zero());
  REQUIRE(expanded.has_node("x0"));
  const CircuitNode* a = expanded.find_node("x0");
  CHECK(a->provenance == CircuitNode::Provenance::LocalExpansion);
  CHECK(a->anchor == "n0_0");

  // Idempotent for a fixed anchor.
  Circuit twice = expand_local_dependencies(
      g.net, nullptr, expanded, "n0_0", single(g.canonical_input), 0.4,
      Estimator::exact(), AblationKind::zero());
  CHECK(node_names(twice) == node_names(expanded));
  CHECK(twice.edges.size() == expanded.edges.size());
}

TEST_CASE("expansion at an anchor with no upstream influence is a fixpoint") {
  GeneratedNet g = make_overdetermined_net();
  DiscoveryOptions options;
  options.t_n = 0.0;
  Circuit c = discover_circuit(g.net, nullptr, single(g.canonical_input),
                               y_of(g), options);
  // Inputs have no mediators upstream of them.
  Circuit expanded = expand_local_dependencies(
      g.net, nullptr, c, "x0", single(g.canonical_input), 0.4,
      Estimator::exact(), AblationKind::zero());
  CHECK(node_names(expanded) == node_names(c));
}

TEST_CASE("expansion rejects anchors outside the circuit") {
  GeneratedNet g = make_overdetermined_net();
  Circuit c = discover_circuit(g.net, nullptr, single(g.canonical_input),
                               y_of(g), DiscoveryOptions{});
  CHECK_THROWS_AS(
      expand_local_dependencies(g.net, nullptr, c, "x0",
                                single(g.canonical_input), 0.4,
                                Estimator::exact(), AblationKind::zero()),
      ValidationError);
}

TEST_CASE("expansion marks verify against exact recomputation") {
  GeneratedNet g = make_nontransitive_net();
  Circuit c = discover_circuit(g.net, nullptr, single(g.canonical_input),
                               y_of(g), DiscoveryOptions{});
  Circuit expanded = expand_local_dependencies(
      g.net, nullptr, c, "n0_0", single(g.canonical_input), 0.4,
      Estimator::linear(), AblationKind::zero());
  TargetMetric anchor_metric =
      TargetMetric::node_activation(NodeRef::neuron(0, 0));
  for (const CircuitNode& n : expanded.nodes) {
    if (n.provenance != CircuitNode::Provenance::LocalExpansion) continue;
    double exact = indirect_effect_exact(g.net, nullptr, g.canonical_input,
                                         n.ref, AblationKind::zero(),
                                         anchor_metric);
    CHECK(std::abs(exact) > 0.4);
  }
}

TEST_CASE("faithfulness: full circuit retains 1, B-only collapses") {
  GeneratedNet g = make_overdetermined_net();
  DiscoveryOptions all;
  all.t_n = 0.0;
  all.t_e = 0.0;
  Circuit full = discover_circuit(g.net, nullptr, single(g.canonical_input),
                                  y_of(g), all);
  Faithfulness f_full = circuit_faithfulness(g.net, nullptr, full,
                                             single(g.canonical_input),
                                             y_of(g), AblationKind::zero());
  CHECK(f_full.defined);
  CHECK(f_full.retention == doctest::Approx(1.0));

  // Circuit containing only B: zeroing the inputs starves it.
  Circuit b_only = full;
  b_only.nodes.clear();
  CircuitNode b;
  b.ref = g.named_nodes.at("B");
  b.name = "n0_0";
  b.score = 1.0;
  b_only.nodes.push_back(b);
  b_only.edges.clear();
  Faithfulness f_b = circuit_faithfulness(g.net, nullptr, b_only,
                                          single(g.canonical_input), y_of(g),
                                          AblationKind::zero());
  CHECK(f_b.retention ==
        doctest::Approx(ref_logistic(-3) / ref_logistic(9)).epsilon(1e-9));
  CHECK(f_b.retention < 0.05);

  // Empty circuit: everything but the output layer is ablated.
  Circuit empty = full;
  empty.nodes.clear();
  empty.edges.clear();
  Faithfulness f_empty = circuit_faithfulness(g.net, nullptr, empty,
                                              single(g.canonical_input),
                                              y_of(g), AblationKind::zero());
  CHECK(f_empty.raw_ratio == doctest::Approx(0.0));
}

TEST_CASE("faithfulness reports undefined on a zero full-model metric") {
  GeneratedNet g = make_overdetermined_net();
  Circuit c = discover_circuit(g.net, nullptr, single(g.canonical_input),
                               y_of(g), DiscoveryOptions{});
  TargetMetric dead = TargetMetric::logit_difference(0, 0);  // always 0
  Faithfulness f = circuit_faithfulness(g.net, nullptr, c,
                                        single(g.canonical_input), dead,
                                        AblationKind::zero());
  CHECK_FALSE(f.defined);
}

TEST_CASE("set search admits the overdetermined pair with its annotation") {
  GeneratedNet g = make_overdetermined_net();
  SetSearchOptions search;
  search.k_max = 2;
  Circuit c = discover_with_set_search(g.net, nullptr,
                                       single(g.canonical_input), y_of(g),
                                       DiscoveryOptions{}, search);
  REQUIRE(c.has_node("x0"));
  REQUIRE(c.has_node("x1"));
  const CircuitNode* a1 = c.find_node("x0");
  CHECK(a1->provenance == CircuitNode::Provenance::SetSearch);
  CHECK(a1->set_members == std::vector<std::string>{"x0", "x1"});
  CHECK(std::abs(a1->score) ==
        doctest::Approx(ref_logistic(9) - ref_logistic(-3)).epsilon(1e-9));
}

TEST_CASE("set search with k_max = 1 reduces to plain discovery") {
  GeneratedNet g = make_overdetermined_net();
  SetSearchOptions search;
  search.k_max = 1;
  Circuit plain = discover_circuit(g.net, nullptr, single(g.canonical_input),
                                   y_of(g), DiscoveryOptions{});
  Circuit searched = discover_with_set_search(g.net, nullptr,
                                              single(g.canonical_input),
                                              y_of(g), DiscoveryOptions{},
                                              search);
  CHECK(node_names(plain) == node_names(searched));
}

TEST_CASE("preemption rounds annotate the backup input") {
  GeneratedNet g = make_preemption_net();
  DiscoveryOptions options;
  options.t_n = 0.25;
  SetSearchOptions search;
  search.k_max = 1;
  search.preemption_rounds = true;
  Circuit c = discover_with_set_search(g.net, nullptr,
                                       single(g.canonical_input), y_of(g),
                                       options, search);
  REQUIRE(c.has_node("x1"));  // A2 enters via round 2
  const CircuitNode* a2 = c.find_node("x1");
  CHECK(a2->provenance == CircuitNode::Provenance::Preempted);
  CHECK(a2->round == 2);
}

TEST_CASE("export: empty circuit is a valid digraph, JSON round-trips") {
  Circuit empty;
  empty.target = "none";
  empty.method = "exact";
  empty.ablation = "zero";
  empty.granularity = "neurons";
  std::string dot = export_circuit_dot(empty);
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.back() == '\n');

  GeneratedNet g = make_overdetermined_net();
  SetSearchOptions search;
  Circuit c = discover_with_set_search(g.net, nullptr,
                                       single(g.canonical_input), y_of(g),
                                       DiscoveryOptions{}, search);
  std::string json = export_circuit_json(c);
  Circuit parsed = parse_circuit_json(json);
  CHECK(export_circuit_json(parsed) == json);
}

TEST_CASE("negative effects render with a red-scale fill") {
  Circuit c;
  c.target = "y";
  c.method = "exact";
  c.ablation = "zero";
  c.granularity = "neurons";
  CircuitNode down;
  down.ref = NodeRef::input(0);
  down.name = "x0";
  down.score = -0.9;
  c.nodes.push_back(down);
  CircuitNode up;
  up.ref = NodeRef::input(1);
  up.name = "x1";
  up.score = 0.9;
  c.nodes.push_back(up);
  std::string dot = export_circuit_dot(c);
  // Dark red for the negative score, dark blue for the positive one.
  CHECK(dot.find("\"x0\" [label=\"x0\\n-0.9\" shape=ellipse style=\"filled\" "
                 "fillcolor=\"#67000d\"") != std::string::npos);
  CHECK(dot.find("fillcolor=\"#08306b\"") != std::string::npos);
}

TEST_CASE("threshold monotonicity and acyclicity over random discoveries") {
  SplitMix64 rng(777777);
  int cases = 0;
  while (cases < 200) {
    NeuralNetwork net = random_net(rng, 4, 3);
    std::vector<double> x = random_input(rng, net.input_width());
    Dataset data = single(x);
    TargetMetric metric =
        net.output_width() >= 2
            ? TargetMetric::logit_difference(0, 1)
            : TargetMetric::node_activation(
                  NodeRef::neuron(static_cast<int>(net.layer_count()) - 1, 0),
                  +1.0);

    DiscoveryOptions lo;
    lo.t_n = rng.next_in(0.0, 0.3);
    lo.t_e = rng.next_in(0.0, 0.1);
    DiscoveryOptions hi = lo;
    hi.t_n = lo.t_n + rng.next_in(0.0, 0.5);
    hi.t_e = lo.t_e + rng.next_in(0.0, 0.2);

    Circuit c_lo = discover_circuit(net, nullptr, data, metric, lo);
    Circuit c_hi = discover_circuit(net, nullptr, data, metric, hi);

    // Raising thresholds never adds nodes or edges.
    std::set<std::string> lo_names = node_names(c_lo);
    for (const CircuitNode& n : c_hi.nodes) CHECK(lo_names.count(n.name) == 1);
    std::set<std::pair<std::string, std::string>> lo_edges;
    for (const CircuitEdge& e : c_lo.edges)
      lo_edges.insert({e.upstream, e.downstream});
    for (const CircuitEdge& e : c_hi.edges)
      CHECK(lo_edges.count({e.upstream, e.downstream}) == 1);

    // DAG: every edge goes strictly forward in the computation order.
    for (const CircuitEdge& e : c_lo.edges) {
      NodeRef up = NodeRef::parse(e.upstream);
      NodeRef down = NodeRef::parse(e.downstream);
      CHECK(precedes(net, nullptr, up, down));
    }
    ++cases;
  }
}

TEST_CASE("discovery validates thresholds and dataset") {
  GeneratedNet g = make_overdetermined_net();
  DiscoveryOptions bad;
  bad.t_n = -0.1;
  CHECK_THROWS_AS(discover_circuit(g.net, nullptr, single(g.canonical_input),
                                   y_of(g), bad),
                  ValidationError);
  CHECK_THROWS_AS(discover_circuit(g.net, nullptr, Dataset{}, y_of(g),
                                   DiscoveryOptions{}),
                  ValidationError);
}
