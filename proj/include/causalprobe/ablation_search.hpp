#ifndef CAUSALPROBE_ABLATION_SEARCH_HPP
#define CAUSALPROBE_ABLATION_SEARCH_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "causalprobe/events.hpp"
#include "causalprobe/scm.hpp"

namespace causalprobe {

// A system (SCM world or neural network context) exposing a scalar metric
// under joint ablation of any subset of candidate nodes. Implementations
// must be pure and deterministic.
class AblationSystem {
 public:
  virtual ~AblationSystem() = default;

  virtual std::size_t candidate_count() const = 0;
  virtual const std::string& candidate_name(std::size_t i) const = 0;

  // Metric with the masked candidates ablated; empty mask = baseline.
  virtual double metric(const std::vector<bool>& ablate_mask) const = 0;
};

// SCM-backed system: ablating candidate i forces variable i to a fixed
// ablation value via do(); the metric reads an event numerically in the
// evaluated world.
class GraphAblationSystem : public AblationSystem {
 public:
  GraphAblationSystem(const CausalGraph& graph, Assignment exogenous,
                      std::vector<std::pair<std::string, Value>> candidates,
                      Event metric_event);

  std::size_t candidate_count() const override { return candidates_.size(); }
  const std::string& candidate_name(std::size_t i) const override {
    return candidates_[i].first;
  }
  double metric(const std::vector<bool>& ablate_mask) const override;

 private:
  const CausalGraph& graph_;
  Assignment exogenous_;
  std::vector<std::pair<std::string, Value>> candidates_;
  Event metric_event_;
};

enum class SearchMode { Exhaustive, Greedy };

struct OverdeterminationReport {
  struct MinimalSet {
    std::vector<std::string> nodes;  // candidate order
    double effect_delta = 0.0;       // joint metric change vs baseline
  };

  std::vector<std::string> candidates;
  std::vector<MinimalSet> minimal_sets;  // by size, then lexicographic
  std::map<std::string, double> singleton_effects;
  SearchMode mode = SearchMode::Exhaustive;
  std::size_t k_max = 1;
  double epsilon = 0.0;
  double baseline_metric = 0.0;
  std::size_t subsets_evaluated = 0;
  std::vector<std::string> warnings;
};

// Exhaustive mode: all subsets of size <= k_max in increasing size,
// reporting inclusion-minimal sets whose joint |metric change| exceeds
// epsilon. Greedy mode: grow one set by locally best additions (largest
// joint |change|, ties to the lowest candidate index) until it exceeds
// epsilon or candidates run out. Exhaustive evaluation is capped at 2^20
// subsets and throws CapExceededError beyond that.
OverdeterminationReport find_minimal_ablation_sets(
    const AblationSystem& system, double epsilon, std::size_t k_max,
    SearchMode mode = SearchMode::Exhaustive);

struct PreemptionReport {
  struct Round {
    std::vector<std::string> ablated_before;
    std::vector<std::string> discovered;
    std::map<std::string, double> singleton_effects;  // vs this round's base
  };

  std::vector<Round> rounds;
  double epsilon = 0.0;
};

// Round 1 reports every candidate whose singleton |metric change| exceeds
// epsilon; each later round permanently ablates everything found so far
// and re-runs the singleton search over the remaining candidates. Stops at
// a fixpoint round (nothing new, recorded) or after max_rounds.
PreemptionReport detect_preemption(const AblationSystem& system,
                                   double epsilon, std::size_t max_rounds);

}  // namespace causalprobe

#endif
