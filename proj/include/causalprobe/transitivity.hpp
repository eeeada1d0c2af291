#ifndef CAUSALPROBE_TRANSITIVITY_HPP
#define CAUSALPROBE_TRANSITIVITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "causalprobe/scm.hpp"

namespace causalprobe {

// Candidate value pairs for the five-condition transitivity check.
struct TransitivityWitness {
  Value a1, a2;  // values of A
  Value b1, b2;  // values of B
  Value c1, c2;  // values of C
};

struct ConditionReport {
  enum class Scheme { HalpernFive, SufficientPair };
  enum class Verdict { Transitive, NotEstablished };

  Scheme scheme = Scheme::HalpernFive;
  std::vector<bool> condition_results;  // five or two entries
  Verdict verdict = Verdict::NotEstablished;
  std::optional<TransitivityWitness> witness;
};

// Evaluates, by intervention:
//   (1) do(A=a1) entails B=b1        (2) do(B=b1) entails C=c1
//   (3) c1 != c2                     (4) do(A=a2) entails B=b2
//   (5) do(A=a2, B=b2) entails C=c2
// Entailment quantifies over every assignment of the non-intervened
// finite-domain exogenous variables; a real-valued one is an error.
ConditionReport check_halpern_conditions(const CausalGraph& graph,
                                         const std::string& a,
                                         const std::string& b,
                                         const std::string& c,
                                         const TransitivityWitness& witness);

// Brute force over all (a1,a2,b1,b2,c1,c2) tuples in lexicographic order
// of the domains' canonical enumerations; first witness passing all five
// conditions, or absent. Requires finite domains for A, B, C.
std::optional<TransitivityWitness> find_transitivity_witness(
    const CausalGraph& graph, const std::string& a, const std::string& b,
    const std::string& c);

// Halpern's sufficient pair:
//   (1) every value b of B is reachable as do(A=x) entails B=b for some x
//   (2) B lies on every causal path from A to C
ConditionReport check_sufficient_conditions(const CausalGraph& graph,
                                            const std::string& a,
                                            const std::string& b,
                                            const std::string& c);

// All simple directed paths from `from` to `to` in lexicographic order of
// the node-name sequences. Throws CapExceededError past 10^6 paths.
std::vector<std::vector<std::string>> enumerate_paths(const CausalGraph& graph,
                                                      const std::string& from,
                                                      const std::string& to);

// True iff at least one directed path from A to C exists and every such
// path passes through B.
bool is_causal_bottleneck(const CausalGraph& graph, const std::string& b,
                          const std::string& a, const std::string& c);

}  // namespace causalprobe

#endif
