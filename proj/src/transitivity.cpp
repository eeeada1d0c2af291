#include "causalprobe/transitivity.hpp"

#include <algorithm>
#include <functional>

#include "causalprobe/errors.hpp"
#include "causalprobe/events.hpp"

namespace causalprobe {

namespace {

// do(interventions) entails `consequent` in every world over the
// non-intervened exogenous variables.
bool entails(const CausalGraph& graph, const InterventionSpec& interventions,
             const Event& consequent) {
  std::vector<int> free_exo;
  for (std::size_t i = 0; i < graph.variable_count(); ++i) {
    int idx = static_cast<int>(i);
    if (!graph.is_exogenous(idx)) continue;
    if (interventions.find(graph.variable(idx).name)) continue;
    const Variable& v = graph.variable(idx);
    if (!v.domain.is_finite_kind())
      throw EvalError("entailment check needs finite exogenous domains; '" +
                      v.name + "' is real-valued");
    free_exo.push_back(idx);
  }

  std::vector<std::vector<Value>> domains;
  for (int idx : free_exo)
    domains.push_back(graph.variable(idx).domain.enumerate());

  std::vector<std::size_t> odometer(free_exo.size(), 0);
  for (;;) {
    Assignment exo;
    for (std::size_t i = 0; i < free_exo.size(); ++i)
      exo.set(graph.variable(free_exo[i]).name, domains[i][odometer[i]]);
    if (!consequent.holds(evaluate(graph, exo, interventions))) return false;
    std::size_t k = free_exo.size();
    while (k > 0) {
      --k;
      if (++odometer[k] < domains[k].size()) break;
      odometer[k] = 0;
      if (k == 0) return true;
    }
    if (free_exo.empty()) return true;
  }
}

void check_in_domain(const CausalGraph& graph, const std::string& name,
                     const Value& v) {
  if (!graph.variable(name).domain.contains(v))
    throw ValidationError("witness value " + format_value(v) + " for '" +
                          name + "' is outside its domain");
}

}  // namespace

ConditionReport check_halpern_conditions(const CausalGraph& graph,
                                         const std::string& a,
                                         const std::string& b,
                                         const std::string& c,
                                         const TransitivityWitness& w) {
  if (a == b || b == c || a == c)
    throw ValidationError("A, B, C must be distinct variables");
  check_in_domain(graph, a, w.a1);
  check_in_domain(graph, a, w.a2);
  check_in_domain(graph, b, w.b1);
  check_in_domain(graph, b, w.b2);
  check_in_domain(graph, c, w.c1);
  check_in_domain(graph, c, w.c2);

  auto do1 = [&](const std::string& var, const Value& v) {
    InterventionSpec s;
    s.force(var, v);
    return s;
  };

  ConditionReport report;
  report.scheme = ConditionReport::Scheme::HalpernFive;
  report.witness = w;
  report.condition_results.resize(5, false);

  report.condition_results[0] = entails(graph, do1(a, w.a1), Event::equals(b, w.b1));
  report.condition_results[1] = entails(graph, do1(b, w.b1), Event::equals(c, w.c1));
  report.condition_results[2] = !value_equal(w.c1, w.c2);
  report.condition_results[3] = entails(graph, do1(a, w.a2), Event::equals(b, w.b2));
  // Condition 5 is a simultaneous two-variable intervention: B's equation
  // is overridden even though A alone would determine it.
  InterventionSpec joint;
  joint.force(a, w.a2);
  joint.force(b, w.b2);
  report.condition_results[4] = entails(graph, joint, Event::equals(c, w.c2));

  bool all = std::all_of(report.condition_results.begin(),
                         report.condition_results.end(),
                         [](bool x) { return x; });
  report.verdict = all ? ConditionReport::Verdict::Transitive
                       : ConditionReport::Verdict::NotEstablished;
  return report;
}

std::optional<TransitivityWitness> find_transitivity_witness(
    const CausalGraph& graph, const std::string& a, const std::string& b,
    const std::string& c) {
  const Domain& da = graph.variable(a).domain;
  const Domain& db = graph.variable(b).domain;
  const Domain& dc = graph.variable(c).domain;
  if (!da.is_finite_kind() || !db.is_finite_kind() || !dc.is_finite_kind())
    throw EvalError("witness search requires finite domains for A, B, C");

  const auto va = da.enumerate();
  const auto vb = db.enumerate();
  const auto vc = dc.enumerate();

  for (const Value& a1 : va)
    for (const Value& a2 : va)
      for (const Value& b1 : vb)
        for (const Value& b2 : vb)
          for (const Value& c1 : vc)
            for (const Value& c2 : vc) {
              TransitivityWitness w{a1, a2, b1, b2, c1, c2};
              if (check_halpern_conditions(graph, a, b, c, w).verdict ==
                  ConditionReport::Verdict::Transitive)
                return w;
            }
  return std::nullopt;
}

ConditionReport check_sufficient_conditions(const CausalGraph& graph,
                                            const std::string& a,
                                            const std::string& b,
                                            const std::string& c) {
  if (a == b || b == c || a == c)
    throw ValidationError("A, B, C must be distinct variables");
  const Domain& da = graph.variable(a).domain;
  const Domain& db = graph.variable(b).domain;
  if (!da.is_finite_kind() || !db.is_finite_kind())
    throw EvalError("surjectivity check requires finite domains for A and B");

  bool surjective = true;
  for (const Value& bv : db.enumerate()) {
    bool reachable = false;
    for (const Value& av : da.enumerate()) {
      InterventionSpec s;
      s.force(a, av);
      if (entails(graph, s, Event::equals(b, bv))) {
        reachable = true;
        break;
      }
    }
    if (!reachable) {
      surjective = false;
      break;
    }
  }

  ConditionReport report;
  report.scheme = ConditionReport::Scheme::SufficientPair;
  report.condition_results = {surjective, is_causal_bottleneck(graph, b, a, c)};
  report.verdict = (report.condition_results[0] && report.condition_results[1])
                       ? ConditionReport::Verdict::Transitive
                       : ConditionReport::Verdict::NotEstablished;
  return report;
}

std::vector<std::vector<std::string>> enumerate_paths(const CausalGraph& graph,
                                                      const std::string& from,
                                                      const std::string& to) {
  int src = graph.index_of(from);
  int dst = graph.index_of(to);
  if (src == dst)
    throw ValidationError("enumerate_paths requires distinct endpoints");

  constexpr std::size_t kPathCap = 1000000;

  // Children sorted by name so DFS emits paths in lexicographic order.
  std::vector<std::vector<int>> sorted_children(graph.variable_count());
  for (std::size_t i = 0; i < graph.variable_count(); ++i) {
    sorted_children[i] = graph.children(static_cast<int>(i));
    std::sort(sorted_children[i].begin(), sorted_children[i].end(),
              [&](int x, int y) {
                return graph.variable(x).name < graph.variable(y).name;
              });
  }

  std::vector<std::vector<std::string>> paths;
  std::vector<int> current{src};

  std::function<void(int)> dfs = [&](int v) {
    if (v == dst) {
      if (paths.size() >= kPathCap)
        throw CapExceededError("path enumeration exceeded 10^6 paths");
      std::vector<std::string> names;
      names.reserve(current.size());
      for (int idx : current) names.push_back(graph.variable(idx).name);
      paths.push_back(std::move(names));
      return;
    }
    for (int child : sorted_children[v]) {
      current.push_back(child);
      dfs(child);
      current.pop_back();
    }
  };
  dfs(src);
  return paths;
}

bool is_causal_bottleneck(const CausalGraph& graph, const std::string& b,
                          const std::string& a, const std::string& c) {
  int ia = graph.index_of(a);
  int ib = graph.index_of(b);
  int ic = graph.index_of(c);
  if (ia == ib || ib == ic || ia == ic)
    throw ValidationError("A, B, C must be distinct variables");

  auto reaches = [&](int from, int to, int blocked) {
    if (from == blocked) return false;
    std::vector<bool> seen(graph.variable_count(), false);
    std::vector<int> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      for (int child : graph.children(v)) {
        if (child == blocked || seen[child]) continue;
        seen[child] = true;
        stack.push_back(child);
      }
    }
    return false;
  };

  if (!reaches(ia, ic, -1)) return false;
  return !reaches(ia, ic, ib);
}

}  // namespace causalprobe
