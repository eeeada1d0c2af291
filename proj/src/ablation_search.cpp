#include "causalprobe/ablation_search.hpp"

#include <algorithm>
#include <cmath>

#include "causalprobe/errors.hpp"

namespace causalprobe {

GraphAblationSystem::GraphAblationSystem(
    const CausalGraph& graph, Assignment exogenous,
    std::vector<std::pair<std::string, Value>> candidates, Event metric_event)
    : graph_(graph),
      exogenous_(std::move(exogenous)),
      candidates_(std::move(candidates)),
      metric_event_(std::move(metric_event)) {
  for (const auto& [name, value] : candidates_) {
    const Variable& v = graph_.variable(name);
    if (!v.domain.contains(value))
      throw ValidationError("ablation value " + format_value(value) +
                            " for '" + name + "' is outside its domain");
  }
  graph_.index_of(metric_event_.variable);
}

double GraphAblationSystem::metric(const std::vector<bool>& ablate_mask) const {
  InterventionSpec spec;
  for (std::size_t i = 0; i < candidates_.size(); ++i)
    if (ablate_mask[i]) spec.force(candidates_[i].first, candidates_[i].second);
  return metric_event_.numeric(evaluate(graph_, exogenous_, spec));
}

namespace {

constexpr std::size_t kSubsetCap = std::size_t{1} << 20;

std::vector<std::string> mask_names(const AblationSystem& sys,
                                    const std::vector<bool>& mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(sys.candidate_name(i));
  return out;
}

// Enumerate index-subsets of {0..n-1} of exactly size k in lexicographic
// order, invoking fn(indices). fn returns false to stop.
template <typename Fn>
void for_each_subset_of_size(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (!fn(idx)) return;
    // Advance to the next combination.
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

}  // namespace

OverdeterminationReport find_minimal_ablation_sets(
    const AblationSystem& system, double epsilon, std::size_t k_max,
    SearchMode mode) {
  const std::size_t n = system.candidate_count();
  if (n == 0) throw ValidationError("candidate list is empty");
  if (k_max < 1) throw ValidationError("k_max must be >= 1");

  OverdeterminationReport report;
  report.mode = mode;
  report.epsilon = epsilon;
  for (std::size_t i = 0; i < n; ++i)
    report.candidates.push_back(system.candidate_name(i));

  if (k_max > n) {
    report.warnings.push_back("k_max " + std::to_string(k_max) +
                              " exceeds candidate count " + std::to_string(n) +
                              "; clamped");
    k_max = n;
  }
  report.k_max = k_max;

  const double baseline = system.metric(std::vector<bool>(n, false));
  report.baseline_metric = baseline;

  std::size_t evaluated = 0;
  auto joint_delta = [&](const std::vector<bool>& mask) {
    if (++evaluated > kSubsetCap)
      throw CapExceededError("subset search exceeded 2^20 evaluations");
    return system.metric(mask) - baseline;
  };

  // Singleton effects are reported in both modes.
  std::vector<double> singleton(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> mask(n, false);
    mask[i] = true;
    singleton[i] = joint_delta(mask);
    report.singleton_effects[system.candidate_name(i)] = singleton[i];
  }

  if (mode == SearchMode::Greedy) {
    std::vector<bool> grown(n, false);
    double grown_delta = 0.0;
    std::size_t grown_size = 0;
    while (grown_size < n && std::abs(grown_delta) <= epsilon) {
      std::size_t best = n;
      double best_delta = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (grown[i]) continue;
        std::vector<bool> mask = grown;
        mask[i] = true;
        double d = grown_size == 0 ? singleton[i] : joint_delta(mask);
        if (best == n || std::abs(d) > std::abs(best_delta)) {
          best = i;
          best_delta = d;
        }
      }
      grown[best] = true;
      grown_delta = best_delta;
      ++grown_size;
    }
    if (std::abs(grown_delta) > epsilon) {
      OverdeterminationReport::MinimalSet s;
      s.nodes = mask_names(system, grown);
      s.effect_delta = grown_delta;
      report.minimal_sets.push_back(std::move(s));
    }
    report.subsets_evaluated = evaluated;
    return report;
  }

  // Exhaustive, by increasing size. A subset containing an already
  // reported set cannot be inclusion-minimal and is skipped unevaluated.
  std::vector<std::vector<bool>> found_masks;
  for (std::size_t size = 1; size <= k_max; ++size) {
    for_each_subset_of_size(n, size, [&](const std::vector<std::size_t>& idx) {
      std::vector<bool> mask(n, false);
      for (std::size_t i : idx) mask[i] = true;
      for (const auto& prev : found_masks) {
        bool contains = true;
        for (std::size_t b = 0; b < n; ++b)
          if (prev[b] && !mask[b]) {
            contains = false;
            break;
          }
        if (contains) return true;
      }
      double d = size == 1 ? singleton[idx[0]] : joint_delta(mask);
      if (std::abs(d) > epsilon) {
        OverdeterminationReport::MinimalSet s;
        s.nodes = mask_names(system, mask);
        s.effect_delta = d;
        report.minimal_sets.push_back(std::move(s));
        found_masks.push_back(std::move(mask));
      }
      return true;
    });
  }
  report.subsets_evaluated = evaluated;
  return report;
}

PreemptionReport detect_preemption(const AblationSystem& system,
                                   double epsilon, std::size_t max_rounds) {
  if (max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
  const std::size_t n = system.candidate_count();

  PreemptionReport report;
  report.epsilon = epsilon;

  std::vector<bool> ablated(n, false);
  std::vector<double> round1_effect(n, 0.0);

  for (std::size_t round = 1; round <= max_rounds; ++round) {
    double base = system.metric(ablated);
    PreemptionReport::Round r;
    r.ablated_before = mask_names(system, ablated);

    std::vector<std::size_t> discovered;
    for (std::size_t i = 0; i < n; ++i) {
      if (ablated[i]) continue;
      std::vector<bool> mask = ablated;
      mask[i] = true;
      double d = system.metric(mask) - base;
      r.singleton_effects[system.candidate_name(i)] = d;
      if (round == 1) round1_effect[i] = d;
      if (std::abs(d) > epsilon) discovered.push_back(i);
    }

    for (std::size_t i : discovered) {
      // A late discovery must have been insignificant in the unablated
      // context; re-checked here rather than assumed.
      if (round > 1 && std::abs(round1_effect[i]) > epsilon)
        throw EvalError("candidate '" + system.candidate_name(i) +
                        "' reported in round " + std::to_string(round) +
                        " already had a significant singleton effect");
      r.discovered.push_back(system.candidate_name(i));
      ablated[i] = true;
    }

    bool fixpoint = r.discovered.empty();
    report.rounds.push_back(std::move(r));
    if (fixpoint) break;
  }
  return report;
}

}  // namespace causalprobe
