#include "causalprobe/scm.hpp"

#include <algorithm>

#include "causalprobe/errors.hpp"
#include "causalprobe/parser.hpp"

namespace causalprobe {

StructuralEquation parse_equation(std::string_view text, std::string target) {
  StructuralEquation eq;
  eq.body = parse_expression(text);
  eq.parents = eq.body.free_variables();
  eq.target = std::move(target);
  return eq;
}

const Value& Assignment::at(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end())
    throw EvalError("no value assigned to variable '" + name + "'");
  return it->second;
}

void InterventionSpec::force(const std::string& name, Value v) {
  for (const auto& [n, _] : entries_)
    if (n == name)
      throw ValidationError("intervention forces variable '" + name +
                            "' more than once");
  entries_.emplace_back(name, std::move(v));
}

const Value* InterventionSpec::find(const std::string& name) const {
  for (const auto& [n, v] : entries_)
    if (n == name) return &v;
  return nullptr;
}

bool CausalGraph::has_variable(const std::string& name) const {
  return index_.count(name) != 0;
}

int CausalGraph::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ValidationError("unknown variable '" + name + "'");
  return it->second;
}

const Variable& CausalGraph::variable(const std::string& name) const {
  return variables_[index_of(name)];
}

bool CausalGraph::is_exogenous(const std::string& name) const {
  return is_exogenous(index_of(name));
}

std::vector<std::string> CausalGraph::exogenous_names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (is_exogenous(static_cast<int>(i))) out.push_back(variables_[i].name);
  return out;
}

namespace {

// DFS cycle search over parent edges; returns one cycle as "X -> Y -> X".
std::string find_cycle(const std::vector<std::vector<int>>& children,
                       const std::vector<Variable>& variables) {
  const int n = static_cast<int>(variables.size());
  std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<int> stack;

  std::string cycle;
  std::function<bool(int)> dfs = [&](int v) {
    state[v] = 1;
    stack.push_back(v);
    for (int c : children[v]) {
      if (state[c] == 1) {
        auto it = std::find(stack.begin(), stack.end(), c);
        for (auto p = it; p != stack.end(); ++p) {
          cycle += variables[*p].name;
          cycle += " -> ";
        }
        cycle += variables[c].name;
        return true;
      }
      if (state[c] == 0 && dfs(c)) return true;
    }
    stack.pop_back();
    state[v] = 2;
    return false;
  };

  for (int v = 0; v < n; ++v)
    if (state[v] == 0 && dfs(v)) return cycle;
  return {};
}

}  // namespace

CausalGraph build_graph(std::vector<Variable> variables,
                        std::vector<StructuralEquation> equations) {
  CausalGraph g;
  g.variables_ = std::move(variables);

  for (std::size_t i = 0; i < g.variables_.size(); ++i) {
    const std::string& name = g.variables_[i].name;
    if (name.empty())
      throw ValidationError("variable with empty name");
    if (!g.index_.emplace(name, static_cast<int>(i)).second)
      throw ValidationError("duplicate variable '" + name + "'");
  }

  const int n = static_cast<int>(g.variables_.size());
  g.equations_.resize(n);
  g.parents_.resize(n);
  g.children_.resize(n);

  std::map<std::string, ValueType> env;
  for (const Variable& v : g.variables_)
    env[v.name] = v.domain.value_type();

  for (StructuralEquation& eq : equations) {
    auto it = g.index_.find(eq.target);
    if (it == g.index_.end())
      throw ValidationError("equation targets undeclared variable '" +
                            eq.target + "'");
    int t = it->second;
    if (g.equations_[t].has_value())
      throw ValidationError("duplicate equation for '" + eq.target + "'");
    for (const std::string& p : eq.parents) {
      auto pit = g.index_.find(p);
      if (pit == g.index_.end())
        throw ValidationError("equation for '" + eq.target +
                              "' references undeclared variable '" + p + "'");
      g.parents_[t].push_back(pit->second);
      g.children_[pit->second].push_back(t);
    }

    ValueType body_type;
    try {
      body_type = infer_type(eq.body, env);
    } catch (const TypeError& e) {
      throw TypeError("equation for '" + eq.target + "': " + e.what());
    }
    ValueType want = g.variables_[t].domain.value_type();
    bool ok = body_type == ValueType::Unknown || body_type == want ||
              (want == ValueType::Real && body_type == ValueType::Bool);
    if (!ok)
      throw TypeError("equation for '" + eq.target +
                      "' does not produce a value in its domain (" +
                      g.variables_[t].domain.describe() + ")");
    g.equations_[t] = std::move(eq);
  }

  std::string cycle = find_cycle(g.children_, g.variables_);
  if (!cycle.empty())
    throw ValidationError("cycle detected: " + cycle);

  // Kahn order over parent counts; stable by declaration index.
  std::vector<int> indeg(n, 0);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(g.parents_[v].size());
  std::vector<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  std::size_t head = 0;
  while (head < ready.size()) {
    int v = ready[head++];
    g.topo_order_.push_back(v);
    for (int c : g.children_[v])
      if (--indeg[c] == 0) ready.push_back(c);
  }
  if (static_cast<int>(g.topo_order_.size()) != n)
    throw ValidationError("cycle detected");  // unreachable after DFS check

  return g;
}

Assignment evaluate(const CausalGraph& graph, const Assignment& exogenous,
                    const InterventionSpec& spec) {
  for (const auto& [name, v] : spec.entries()) {
    const Variable& var = graph.variable(name);
    if (!var.domain.contains(v))
      throw EvalError("forced value " + format_value(v) + " for '" + name +
                      "' is outside its domain " + var.domain.describe());
  }

  std::vector<Value> values(graph.variable_count());
  std::vector<char> have(graph.variable_count(), 0);

  auto lookup = [&](const std::string& name) -> Value {
    int idx = graph.index_of(name);
    if (!have[idx])
      throw EvalError("variable '" + name + "' read before assignment");
    return values[idx];
  };

  for (int idx : graph.topological_order()) {
    const Variable& var = graph.variable(idx);
    if (const Value* forced = spec.find(var.name)) {
      values[idx] = *forced;
    } else if (graph.is_exogenous(idx)) {
      if (!exogenous.has(var.name))
        throw EvalError("missing exogenous value for '" + var.name + "'");
      Value v = exogenous.at(var.name);
      if (!var.domain.contains(v))
        throw EvalError("exogenous value " + format_value(v) + " for '" +
                        var.name + "' is outside its domain " +
                        var.domain.describe());
      values[idx] = std::move(v);
    } else {
      Value v = eval_expr(graph.equation(idx)->body, lookup);
      if (!var.domain.contains(v))
        throw EvalError("computed value " + format_value(v) + " for '" +
                        var.name + "' is outside its domain " +
                        var.domain.describe());
      values[idx] = std::move(v);
    }
    have[idx] = 1;
  }

  Assignment world;
  for (std::size_t i = 0; i < graph.variable_count(); ++i)
    world.set(graph.variable(static_cast<int>(i)).name, values[i]);
  return world;
}

std::vector<Assignment> enumerate_exogenous(const CausalGraph& graph) {
  std::vector<int> exo;
  for (std::size_t i = 0; i < graph.variable_count(); ++i)
    if (graph.is_exogenous(static_cast<int>(i)))
      exo.push_back(static_cast<int>(i));

  std::vector<std::vector<Value>> domains;
  for (int idx : exo) {
    const Variable& v = graph.variable(idx);
    if (!v.domain.is_finite_kind())
      throw EvalError("exogenous variable '" + v.name +
                      "' has a real interval domain; enumeration undefined");
    domains.push_back(v.domain.enumerate());
  }

  std::vector<Assignment> out;
  std::vector<std::size_t> odometer(exo.size(), 0);
  for (;;) {
    Assignment a;
    for (std::size_t i = 0; i < exo.size(); ++i)
      a.set(graph.variable(exo[i]).name, domains[i][odometer[i]]);
    out.push_back(std::move(a));
    // Advance rightmost-fastest; empty exogenous set yields one world.
    std::size_t k = exo.size();
    while (k > 0) {
      --k;
      if (++odometer[k] < domains[k].size()) break;
      odometer[k] = 0;
      if (k == 0) return out;
    }
    if (exo.empty()) return out;
  }
}

std::vector<Assignment> enumerate_worlds(const CausalGraph& graph) {
  std::vector<Assignment> out;
  for (const Assignment& exo : enumerate_exogenous(graph))
    out.push_back(evaluate(graph, exo));
  return out;
}

}  // namespace causalprobe
