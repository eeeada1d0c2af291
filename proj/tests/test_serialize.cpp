#include <doctest.h>

#include "causalprobe/errors.hpp"
#include "causalprobe/serialize.hpp"
#include "test_helpers.hpp"

using namespace causalprobe;
using namespace causalprobe::testing;

TEST_CASE("scenario JSON round-trips through build_graph") {
  Scenario s = hiker_scenario();
  ordered_json j = scenario_to_json(s);
  Scenario back = scenario_from_json(j);
  CHECK(back.variables.size() == 3);
  CHECK(back.equations.size() == 2);
  CHECK(std::get<bool>(back.context.at("A")) == true);

  CausalGraph g = build_graph(back.variables, back.equations);
  Assignment world = evaluate(g, back.context);
  CHECK(std::get<bool>(world.at("C")) == true);
}

TEST_CASE("scenario with set and real domains parses") {
  ordered_json j = ordered_json::parse(R"json({
    "variables": [
      {"name": "mode", "domain": {"set": ["slow", "fast"]}},
      {"name": "x", "domain": {"real": [0, 10]}},
      {"name": "out", "domain": {"real": [0, 20]}}
    ],
    "equations": [{"target": "out", "expr": "ite(mode == mode, x + x, x)"}]
  })json");
  Scenario s = scenario_from_json(j);
  CausalGraph g = build_graph(s.variables, s.equations);
  Assignment ctx;
  ctx.set("mode", Value(std::string("slow")));
  ctx.set("x", Value(3.0));
  CHECK(std::get<double>(evaluate(g, ctx).at("out")) == 6.0);
}

TEST_CASE("malformed scenarios raise ValidationError") {
  CHECK_THROWS_AS(scenario_from_json(ordered_json::parse(
                      R"({"variables": [{"name": "A", "domain": "octarine"}]})")),
                  ValidationError);
  CHECK_THROWS_AS(scenario_from_json(ordered_json::parse(R"({"nope": 1})")),
                  ValidationError);
}

TEST_CASE("network JSON round-trips bit-exactly") {
  GeneratedNet g = make_preemption_net();
  ordered_json j = network_to_json(g.net);
  auto [net, dict] = network_from_json(j);
  CHECK_FALSE(dict.has_value());
  REQUIRE(net.layer_count() == g.net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    CHECK(net.layer(l).weights == g.net.layer(l).weights);
    CHECK(net.layer(l).bias == g.net.layer(l).bias);
    CHECK(net.layer(l).activation == g.net.layer(l).activation);
  }
  // Same behaviour after the round trip.
  CHECK(forward(net, {1.0, 1.0}).output() ==
        forward(g.net, {1.0, 1.0}).output());
}

TEST_CASE("network JSON carries an optional dictionary") {
  NeuralNetwork net = init_network(
      2, {2, 1}, {Activation::Relu, Activation::Identity}, 13);
  FeatureDictionary dict = identity_dictionary(0, 2);
  ordered_json j = network_to_json(net, &dict);
  auto [net2, dict2] = network_from_json(j);
  REQUIRE(dict2.has_value());
  CHECK(dict2->attach_layer == 0);
  CHECK(dict2->w_encode == dict.w_encode);
  CHECK(dict2->b_decode == dict.b_decode);
}

TEST_CASE("dataset files are arrays of input/label records") {
  Dataset d = make_succession_task(2);
  ordered_json j = dataset_to_json(d);
  Dataset back = dataset_from_json(j);
  REQUIRE(back.size() == d.size());
  CHECK(back.examples[0].input == d.examples[0].input);
  CHECK(back.examples[0].label == d.examples[0].label);
  CHECK_THROWS_AS(dataset_from_json(ordered_json::object()), ValidationError);
}

TEST_CASE("effect table CSV has the documented header") {
  EffectTable t;
  t.nodes = {NodeRef::input(0)};
  t.names = {"x0"};
  t.effects = {0.5};
  t.variances = {0.0};
  t.method = "exact";
  std::string csv = effect_table_to_csv(t);
  CHECK(csv.rfind("node,estimate,variance,method\n", 0) == 0);
  CHECK(csv.find("x0,0.5,0,exact") != std::string::npos);
}

TEST_CASE("values and assignments serialize by type") {
  CHECK(value_to_json(Value(true)) == ordered_json(true));
  CHECK(value_to_json(Value(0.25)) == ordered_json(0.25));
  CHECK(value_to_json(Value(std::string("red"))) == ordered_json("red"));
  CHECK(std::get<double>(value_from_json(ordered_json(3))) == 3.0);

  Assignment a;
  a.set("A", Value(true));
  a.set("x", Value(1.5));
  Assignment back = assignment_from_json(assignment_to_json(a));
  CHECK(back == a);
}
