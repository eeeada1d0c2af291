#include <doctest.h>

#include "causalprobe/errors.hpp"
#include "test_helpers.hpp"

using namespace causalprobe;
using namespace causalprobe::testing;

namespace {

GraphAblationSystem rocks_system() {
  static CausalGraph g = rocks_graph();
  return GraphAblationSystem(
      g, bool_context({{"A1", true}, {"A2", true}}),
      {{"A1", Value(false)}, {"A2", Value(false)}},
      Event::equals("B", Value(true)));
}

}  // namespace

TEST_CASE("rocks: singletons do nothing, {A1, A2} is the minimal set") {
  GraphAblationSystem sys = rocks_system();
  OverdeterminationReport r =
      find_minimal_ablation_sets(sys, 0.5, 2, SearchMode::Exhaustive);

  CHECK(r.singleton_effects.at("A1") == 0.0);
  CHECK(r.singleton_effects.at("A2") == 0.0);
  REQUIRE(r.minimal_sets.size() == 1);
  CHECK(r.minimal_sets[0].nodes == std::vector<std::string>{"A1", "A2"});
  CHECK(r.minimal_sets[0].effect_delta == -1.0);
}

TEST_CASE("single-cause graph reports only the singleton at k_max 2") {
  std::vector<Variable> vars{{"A", Domain::boolean()},
                             {"D", Domain::boolean()},
                             {"B", Domain::boolean()}};
  std::vector<StructuralEquation> eqs{parse_equation("A", "B")};
  CausalGraph g = build_graph(vars, eqs);
  GraphAblationSystem sys(g, bool_context({{"A", true}, {"D", true}}),
                          {{"A", Value(false)}, {"D", Value(false)}},
                          Event::equals("B", Value(true)));
  OverdeterminationReport r =
      find_minimal_ablation_sets(sys, 0.5, 2, SearchMode::Exhaustive);
  REQUIRE(r.minimal_sets.size() == 1);
  CHECK(r.minimal_sets[0].nodes == std::vector<std::string>{"A"});
  // No size-2 superset of {A} is reported.
}

TEST_CASE("k_max beyond the candidate count clamps with a warning") {
  GraphAblationSystem sys = rocks_system();
  OverdeterminationReport r =
      find_minimal_ablation_sets(sys, 0.5, 7, SearchMode::Exhaustive);
  CHECK(r.k_max == 2);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("clamped") != std::string::npos);
}

TEST_CASE("greedy finds the overdetermined pair and never reports below epsilon") {
  GraphAblationSystem sys = rocks_system();
  OverdeterminationReport r =
      find_minimal_ablation_sets(sys, 0.5, 2, SearchMode::Greedy);
  REQUIRE(r.minimal_sets.size() == 1);
  CHECK(r.minimal_sets[0].nodes == std::vector<std::string>{"A1", "A2"});
  CHECK(std::abs(r.minimal_sets[0].effect_delta) > 0.5);
}

TEST_CASE("greedy on an unreachable epsilon reports nothing") {
  GraphAblationSystem sys = rocks_system();
  OverdeterminationReport r =
      find_minimal_ablation_sets(sys, 5.0, 2, SearchMode::Greedy);
  CHECK(r.minimal_sets.empty());
}

TEST_CASE("exhaustive matches the naive oracle on random boolean SCMs") {
  SplitMix64 rng(424242);
  for (int trial = 0; trial < 30; ++trial) {
    CausalGraph g = random_bool_graph(rng, 3, 4);
    Assignment exo = random_exogenous(g, rng);

    // Candidates: the exogenous variables, ablated to their negation.
    std::vector<std::pair<std::string, Value>> candidates;
    for (const std::string& name : g.exogenous_names()) {
      bool actual = std::get<bool>(exo.at(name));
      candidates.emplace_back(name, Value(!actual));
    }
    Event metric = Event::equals("v3", Value(true));
    GraphAblationSystem sys(g, exo, candidates, metric);

    const double epsilon = 0.5;
    const std::size_t k_max = candidates.size();
    OverdeterminationReport r =
        find_minimal_ablation_sets(sys, epsilon, k_max, SearchMode::Exhaustive);

    auto expected = naive_minimal_sets(sys, epsilon, k_max);
    std::vector<std::vector<std::string>> got;
    for (const auto& s : r.minimal_sets) got.push_back(s.nodes);
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
  }
}

TEST_CASE("greedy sets always exceed epsilon on random SCMs") {
  SplitMix64 rng(11111);
  for (int trial = 0; trial < 30; ++trial) {
    CausalGraph g = random_bool_graph(rng, 3, 4);
    Assignment exo = random_exogenous(g, rng);
    std::vector<std::pair<std::string, Value>> candidates;
    for (const std::string& name : g.exogenous_names()) {
      bool actual = std::get<bool>(exo.at(name));
      candidates.emplace_back(name, Value(!actual));
    }
    GraphAblationSystem sys(g, exo, candidates,
                            Event::equals("v3", Value(true)));
    OverdeterminationReport r = find_minimal_ablation_sets(
        sys, 0.5, candidates.size(), SearchMode::Greedy);
    for (const auto& s : r.minimal_sets)
      CHECK(std::abs(s.effect_delta) > 0.5);
  }
}

TEST_CASE("preemption scenario: round 1 {A1}, round 2 {A2}, round 3 fixpoint") {
  Scenario s = preemption_scenario();
  CausalGraph g = graph_of(s);
  GraphAblationSystem sys(g, s.context,
                          {{"A1", Value(false)}, {"A2", Value(false)}},
                          Event::threshold("B", Event::Rel::Ge, 0.0));
  PreemptionReport r = detect_preemption(sys, 0.25, 5);

  REQUIRE(r.rounds.size() == 3);
  CHECK(r.rounds[0].discovered == std::vector<std::string>{"A1"});
  CHECK(r.rounds[1].discovered == std::vector<std::string>{"A2"});
  CHECK(r.rounds[1].ablated_before == std::vector<std::string>{"A1"});
  CHECK(r.rounds[2].discovered.empty());

  CHECK(r.rounds[0].singleton_effects.at("A1") == doctest::Approx(-0.5));
  CHECK(r.rounds[0].singleton_effects.at("A2") == doctest::Approx(0.0));
  CHECK(r.rounds[1].singleton_effects.at("A2") == doctest::Approx(-0.5));
}

TEST_CASE("rocks is pure overdetermination: preemption finds nothing") {
  GraphAblationSystem sys = rocks_system();
  PreemptionReport r = detect_preemption(sys, 0.5, 3);
  REQUIRE(r.rounds.size() == 1);
  CHECK(r.rounds[0].discovered.empty());
}

TEST_CASE("single-cause chain reaches a fixpoint in round 2") {
  std::vector<Variable> vars{{"A", Domain::boolean()}, {"B", Domain::boolean()}};
  std::vector<StructuralEquation> eqs{parse_equation("A", "B")};
  CausalGraph g = build_graph(vars, eqs);
  GraphAblationSystem sys(g, bool_context({{"A", true}}),
                          {{"A", Value(false)}}, Event::equals("B", Value(true)));
  PreemptionReport r = detect_preemption(sys, 0.5, 4);
  REQUIRE(r.rounds.size() == 2);
  CHECK(r.rounds[0].discovered == std::vector<std::string>{"A"});
  CHECK(r.rounds[1].discovered.empty());
}

TEST_CASE("empty candidates and bad k_max are rejected") {
  CausalGraph g = rocks_graph();
  CHECK_THROWS_AS(
      GraphAblationSystem(g, bool_context({{"A1", true}, {"A2", true}}),
                          {{"A1", Value(2.0)}},
                          Event::equals("B", Value(true))),
      ValidationError);

  GraphAblationSystem sys = rocks_system();
  CHECK_THROWS_AS(find_minimal_ablation_sets(sys, 0.5, 0), ValidationError);
}
