#include "causalprobe/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "causalprobe/errors.hpp"

namespace causalprobe {

DependenceVerdict causal_dependence(const CausalGraph& graph,
                                    const Assignment& exogenous,
                                    const CauseSpec& cause,
                                    const Event& effect,
                                    std::optional<double> epsilon) {
  graph.index_of(effect.variable);
  Assignment factual = evaluate(graph, exogenous);

  if (!cause.actual.holds(factual))
    throw EvalError("stated cause (" + cause.actual.describe() +
                    ") contradicts the factual world");

  Value alt = resolve_alternate(cause, graph);
  if (value_equal(alt, factual.at(cause.actual.variable)))
    throw ValidationError("alternate value for '" + cause.actual.variable +
                          "' equals its actual value");

  InterventionSpec spec;
  spec.force(cause.actual.variable, alt);
  Assignment counterfactual = evaluate(graph, exogenous, spec);

  DependenceVerdict v;
  v.condition_i = effect.holds(factual);
  double before = effect.numeric(factual);
  double after = effect.numeric(counterfactual);
  v.effect_delta = after - before;
  v.epsilon = epsilon.value_or(0.1 * std::abs(before));

  bool real_effect =
      graph.variable(effect.variable).domain.kind() == Domain::Kind::Real;
  v.condition_ii = real_effect ? std::abs(v.effect_delta) > v.epsilon
                               : !effect.holds(counterfactual);
  v.holds = v.condition_i && v.condition_ii;
  return v;
}

std::optional<std::vector<Event>> causal_chain(const CausalGraph& graph,
                                               const Assignment& exogenous,
                                               const Event& from,
                                               const Event& to,
                                               std::optional<double> epsilon) {
  int src = graph.index_of(from.variable);
  int dst = graph.index_of(to.variable);
  if (src == dst)
    throw ValidationError("causal_chain requires distinct endpoints");

  Assignment factual = evaluate(graph, exogenous);
  if (!from.holds(factual))
    throw EvalError("chain source event (" + from.describe() +
                    ") does not hold in the factual world");

  auto event_at = [&](int idx) -> Event {
    if (idx == src) return from;
    if (idx == dst) return to;
    const std::string& name = graph.variable(idx).name;
    return Event::equals(name, factual.at(name));
  };

  // Edge u -> v is active iff event(v) causally depends on event(u).
  std::map<std::pair<int, int>, bool> memo;
  auto edge_active = [&](int u, int v) -> bool {
    auto key = std::make_pair(u, v);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool active = false;
    try {
      CauseSpec c{event_at(u), std::nullopt};
      active = causal_dependence(graph, exogenous, c, event_at(v), epsilon)
                   .holds;
    } catch (const Error&) {
      active = false;  // e.g. default alternate coincides with the actual
    }
    memo[key] = active;
    return active;
  };

  const int n = static_cast<int>(graph.variable_count());
  constexpr int kInf = 1 << 28;

  auto bfs = [&](int start, bool forward) {
    std::vector<int> dist(n, kInf);
    dist[start] = 0;
    std::vector<int> queue{start};
    std::size_t head = 0;
    while (head < queue.size()) {
      int u = queue[head++];
      const auto& next = forward ? graph.children(u) : graph.parents(u);
      for (int v : next) {
        bool active = forward ? edge_active(u, v) : edge_active(v, u);
        if (active && dist[v] == kInf) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return dist;
  };

  std::vector<int> dist_s = bfs(src, true);
  if (dist_s[dst] >= kInf) return std::nullopt;
  std::vector<int> dist_t = bfs(dst, false);

  // Walk the lexicographically least shortest path.
  std::vector<Event> chain;
  int cur = src;
  chain.push_back(event_at(cur));
  while (cur != dst) {
    int best = -1;
    for (int v : graph.children(cur)) {
      if (dist_s[v] != dist_s[cur] + 1 || dist_t[v] != dist_t[cur] - 1)
        continue;
      if (!edge_active(cur, v)) continue;
      if (best < 0 ||
          graph.variable(v).name < graph.variable(best).name)
        best = v;
    }
    if (best < 0) return std::nullopt;
    cur = best;
    chain.push_back(event_at(cur));
  }
  return chain;
}

}  // namespace causalprobe
