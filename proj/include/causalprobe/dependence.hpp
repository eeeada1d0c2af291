#ifndef CAUSALPROBE_DEPENDENCE_HPP
#define CAUSALPROBE_DEPENDENCE_HPP

#include <optional>
#include <vector>

#include "causalprobe/events.hpp"
#include "causalprobe/scm.hpp"

namespace causalprobe {

// Lewis causal dependence of an effect on a cause:
//   (i)  the effect obtains in the factual world, and
//   (ii) under do(cause = alternate) the effect fails (discrete) or the
//        effect variable moves by more than epsilon (real).
struct DependenceVerdict {
  bool holds = false;
  bool condition_i = false;
  bool condition_ii = false;
  double effect_delta = 0.0;  // counterfactual minus factual, numeric
  double epsilon = 0.0;       // the epsilon actually applied
};

// `epsilon` absent means 0.1 x |factual effect metric|.
DependenceVerdict causal_dependence(const CausalGraph& graph,
                                    const Assignment& exogenous,
                                    const CauseSpec& cause,
                                    const Event& effect,
                                    std::optional<double> epsilon = {});

// Shortest directed path from `from.variable` to `to.variable` whose every
// consecutive pair satisfies causal_dependence in the given context; ties
// broken by lexicographic node order. Intermediate events are the factual
// values of the path variables. Absent when no such chain exists.
std::optional<std::vector<Event>> causal_chain(
    const CausalGraph& graph, const Assignment& exogenous, const Event& from,
    const Event& to, std::optional<double> epsilon = {});

}  // namespace causalprobe

#endif
