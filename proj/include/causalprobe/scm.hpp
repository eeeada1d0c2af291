#ifndef CAUSALPROBE_SCM_HPP
#define CAUSALPROBE_SCM_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causalprobe/expr.hpp"
#include "causalprobe/value.hpp"

namespace causalprobe {

struct Variable {
  std::string name;
  Domain domain;
};

struct StructuralEquation {
  std::string target;                 // may be empty until bound
  std::vector<std::string> parents;   // free variables, first-appearance order
  Expr body;
};

// Parse an equation body. Parents are the free variables of the
// expression; `target` is attached verbatim.
StructuralEquation parse_equation(std::string_view text,
                                  std::string target = {});

// Total valuation of graph variables ("world").
class Assignment {
 public:
  Assignment() = default;

  void set(const std::string& name, Value v) { values_[name] = std::move(v); }
  bool has(const std::string& name) const { return values_.count(name) != 0; }
  const Value& at(const std::string& name) const;
  std::size_t size() const { return values_.size(); }

  const std::map<std::string, Value>& values() const { return values_; }

  bool operator==(const Assignment& other) const {
    return values_ == other.values_;
  }

 private:
  std::map<std::string, Value> values_;
};

// Ordered do-intervention list: (variable, forced value) pairs. Duplicate
// variables are rejected; forced values are domain-checked against the
// graph at evaluation time.
class InterventionSpec {
 public:
  InterventionSpec() = default;

  void force(const std::string& name, Value v);
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<std::string, Value>>& entries() const {
    return entries_;
  }
  const Value* find(const std::string& name) const;

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

// Finite structural causal model: a validated DAG with one equation per
// endogenous variable and a cached topological order. Immutable after
// construction; all evaluation is pure.
class CausalGraph {
 public:
  std::size_t variable_count() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int idx) const { return variables_[idx]; }

  bool has_variable(const std::string& name) const;
  int index_of(const std::string& name) const;  // throws if unknown
  const Variable& variable(const std::string& name) const;

  bool is_exogenous(int idx) const { return !equations_[idx].has_value(); }
  bool is_exogenous(const std::string& name) const;
  std::vector<std::string> exogenous_names() const;

  const std::optional<StructuralEquation>& equation(int idx) const {
    return equations_[idx];
  }

  const std::vector<int>& parents(int idx) const { return parents_[idx]; }
  const std::vector<int>& children(int idx) const { return children_[idx]; }

  // Indices in a valid topological order (parents before children).
  const std::vector<int>& topological_order() const { return topo_order_; }

  friend CausalGraph build_graph(std::vector<Variable> variables,
                                 std::vector<StructuralEquation> equations);

 private:
  std::vector<Variable> variables_;
  std::map<std::string, int> index_;
  std::vector<std::optional<StructuralEquation>> equations_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<int> topo_order_;
};

// Validates names, domains, uniqueness, typing and acyclicity. On a cycle
// the error message lists one offending cycle.
CausalGraph build_graph(std::vector<Variable> variables,
                        std::vector<StructuralEquation> equations);

// Evaluate in topological order under do-semantics: variables in `spec`
// take their forced value and their equation is never consulted; forced
// exogenous variables ignore `exogenous` likewise.
Assignment evaluate(const CausalGraph& graph, const Assignment& exogenous,
                    const InterventionSpec& spec = {});

// One evaluated world per element of the Cartesian product of the
// exogenous domains, first declared variable most significant. Throws if
// any exogenous domain is a real interval.
std::vector<Assignment> enumerate_worlds(const CausalGraph& graph);

// All assignments of the exogenous variables only (same order as
// enumerate_worlds), without evaluating.
std::vector<Assignment> enumerate_exogenous(const CausalGraph& graph);

}  // namespace causalprobe

#endif
