#include <doctest.h>

#include "causalprobe/dependence.hpp"
#include "causalprobe/errors.hpp"
#include "test_helpers.hpp"

using namespace causalprobe;
using namespace causalprobe::testing;

namespace {

CauseSpec bool_cause(const std::string& name, bool actual) {
  return CauseSpec{Event::equals(name, Value(actual)), std::nullopt};
}

}  // namespace

TEST_CASE("hiker: C depends on B, B depends on A, C does not depend on A") {
  CausalGraph g = hiker_graph();
  Assignment ctx = bool_context({{"A", true}});
  Event lives = Event::equals("C", Value(true));

  DependenceVerdict on_b = causal_dependence(g, ctx, bool_cause("B", true), lives);
  CHECK(on_b.holds);
  CHECK(on_b.condition_i);
  CHECK(on_b.condition_ii);
  CHECK(on_b.effect_delta == -1.0);

  DependenceVerdict b_on_a = causal_dependence(
      g, ctx, bool_cause("A", true), Event::equals("B", Value(true)));
  CHECK(b_on_a.holds);

  DependenceVerdict on_a = causal_dependence(g, ctx, bool_cause("A", true), lives);
  CHECK_FALSE(on_a.holds);
  CHECK(on_a.condition_i);
  CHECK_FALSE(on_a.condition_ii);
  CHECK(on_a.effect_delta == 0.0);
}

TEST_CASE("rocks: B depends on neither thrower alone") {
  CausalGraph g = rocks_graph();
  Assignment ctx = bool_context({{"A1", true}, {"A2", true}});
  Event shattered = Event::equals("B", Value(true));

  CHECK_FALSE(causal_dependence(g, ctx, bool_cause("A1", true), shattered).holds);
  CHECK_FALSE(causal_dependence(g, ctx, bool_cause("A2", true), shattered).holds);
}

TEST_CASE("dependence errors: contradicted actual, alternate equals actual") {
  CausalGraph g = hiker_graph();
  Assignment ctx = bool_context({{"A", true}});
  Event lives = Event::equals("C", Value(true));

  CHECK_THROWS_AS(
      causal_dependence(g, ctx, bool_cause("B", false), lives), EvalError);

  CauseSpec same{Event::equals("B", Value(true)), Value(true)};
  CHECK_THROWS_AS(causal_dependence(g, ctx, same, lives), ValidationError);
}

TEST_CASE("hiker chain A -> B -> C exists though end-to-end dependence fails") {
  CausalGraph g = hiker_graph();
  Assignment ctx = bool_context({{"A", true}});
  auto chain = causal_chain(g, ctx, Event::equals("A", Value(true)),
                            Event::equals("C", Value(true)));
  REQUIRE(chain.has_value());
  REQUIRE(chain->size() == 3);
  CHECK((*chain)[0].variable == "A");
  CHECK((*chain)[1].variable == "B");
  CHECK((*chain)[2].variable == "C");
}

TEST_CASE("billiards chain follows the rail") {
  CausalGraph g = billiards_graph();
  Assignment ctx = bool_context({{"A", true}});
  auto chain = causal_chain(g, ctx, Event::equals("A", Value(true)),
                            Event::equals("C", Value(true)));
  REQUIRE(chain.has_value());
  CHECK(chain->size() == 3);
}

TEST_CASE("no chain between disconnected variables") {
  std::vector<Variable> vars{{"A", Domain::boolean()},
                             {"B", Domain::boolean()},
                             {"C", Domain::boolean()}};
  std::vector<StructuralEquation> eqs{parse_equation("B", "C")};
  CausalGraph g = build_graph(vars, eqs);
  Assignment ctx = bool_context({{"A", true}, {"B", true}});
  auto chain = causal_chain(g, ctx, Event::equals("A", Value(true)),
                            Event::equals("C", Value(true)));
  CHECK_FALSE(chain.has_value());
}

TEST_CASE("chain requires distinct endpoints and a factual source event") {
  CausalGraph g = hiker_graph();
  Assignment ctx = bool_context({{"A", true}});
  CHECK_THROWS_AS(causal_chain(g, ctx, Event::equals("A", Value(true)),
                               Event::equals("A", Value(true))),
                  ValidationError);
  CHECK_THROWS_AS(causal_chain(g, ctx, Event::equals("A", Value(false)),
                               Event::equals("C", Value(true))),
                  EvalError);
}

TEST_CASE("chain ties break toward the lexicographically smaller path") {
  // Diamond with two equally short active chains A -> B1 -> C, A -> B2 -> C.
  std::vector<Variable> vars{{"A", Domain::boolean()},
                             {"B1", Domain::boolean()},
                             {"B2", Domain::boolean()},
                             {"C", Domain::boolean()}};
  std::vector<StructuralEquation> eqs{parse_equation("A", "B1"),
                                      parse_equation("A", "B2"),
                                      parse_equation("B1 and B2", "C")};
  CausalGraph g = build_graph(vars, eqs);
  Assignment ctx = bool_context({{"A", true}});
  auto chain = causal_chain(g, ctx, Event::equals("A", Value(true)),
                            Event::equals("C", Value(true)));
  REQUIRE(chain.has_value());
  REQUIRE(chain->size() == 3);
  CHECK((*chain)[1].variable == "B1");
}

TEST_CASE("do() screens off everything upstream of the pinned variable") {
  // u -> v0 -> v1 -> v2: with v0 pinned, u's value cannot matter.
  std::vector<Variable> vars{{"u", Domain::boolean()},
                             {"v0", Domain::boolean()},
                             {"v1", Domain::boolean()},
                             {"v2", Domain::boolean()}};
  std::vector<StructuralEquation> eqs{parse_equation("u", "v0"),
                                      parse_equation("not v0", "v1"),
                                      parse_equation("v1", "v2")};
  CausalGraph g = build_graph(vars, eqs);
  InterventionSpec pin;
  pin.force("v0", Value(true));
  Assignment with_u = evaluate(g, bool_context({{"u", true}}), pin);
  Assignment without_u = evaluate(g, bool_context({{"u", false}}), pin);
  CHECK(value_equal(with_u.at("v1"), without_u.at("v1")));
  CHECK(value_equal(with_u.at("v2"), without_u.at("v2")));
}

TEST_CASE("real-valued effects use the epsilon reading") {
  // B := 0.3 * A over a real input.
  std::vector<Variable> vars{{"A", Domain::real_interval(0, 10)},
                             {"B", Domain::real_interval(0, 10)}};
  std::vector<StructuralEquation> eqs{parse_equation("0.3 * A", "B")};
  CausalGraph g = build_graph(vars, eqs);
  Assignment ctx;
  ctx.set("A", Value(1.0));

  // Alternate defaults to the zero ablation for reals.
  CauseSpec cause{Event::equals("A", Value(1.0)), std::nullopt};
  Event effect = Event::equals("B", Value(0.3));

  DependenceVerdict strict =
      causal_dependence(g, ctx, cause, effect, 0.5);
  CHECK_FALSE(strict.holds);  // |delta| = 0.3 <= 0.5
  DependenceVerdict loose = causal_dependence(g, ctx, cause, effect, 0.1);
  CHECK(loose.holds);
  CHECK(loose.effect_delta == doctest::Approx(-0.3));

  // Default epsilon is 0.1 x |factual| = 0.03 here.
  DependenceVerdict defaulted = causal_dependence(g, ctx, cause, effect);
  CHECK(defaulted.epsilon == doctest::Approx(0.03));
  CHECK(defaulted.holds);
}

TEST_CASE("threshold events read factual truth") {
  std::vector<Variable> vars{{"A", Domain::real_interval(0, 10)},
                             {"B", Domain::real_interval(0, 10)}};
  std::vector<StructuralEquation> eqs{parse_equation("2 * A", "B")};
  CausalGraph g = build_graph(vars, eqs);
  Assignment ctx;
  ctx.set("A", Value(3.0));

  Event high = Event::threshold("B", Event::Rel::Ge, 5.0);
  CauseSpec cause{Event::threshold("A", Event::Rel::Gt, 1.0), Value(0.0)};
  DependenceVerdict v = causal_dependence(g, ctx, cause, high, 1.0);
  CHECK(v.condition_i);      // B = 6 >= 5
  CHECK(v.condition_ii);     // B drops to 0, |delta| = 6 > 1
  CHECK(v.holds);
}
