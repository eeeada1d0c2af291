#ifndef CAUSALPROBE_SERIALIZE_HPP
#define CAUSALPROBE_SERIALIZE_HPP

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "causalprobe/ablation_search.hpp"
#include "causalprobe/dependence.hpp"
#include "causalprobe/effects.hpp"
#include "causalprobe/generators.hpp"
#include "causalprobe/transitivity.hpp"

namespace causalprobe {

using ordered_json = nlohmann::ordered_json;

// ---- scenario files ----
// { "variables": [{"name": .., "domain": "bool" | {"set": [..]} |
//   {"real": [lo, hi]}}], "equations": [{"target": .., "expr": ..}],
//   "context": {name: value} (optional), "description": .. (optional) }
Scenario scenario_from_json(const ordered_json& j);
ordered_json scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::string& path);

// ---- network files ----
// { "format_version": 1, "input_width": n, "layers": [{"weights": [[..]],
//   "bias": [..], "activation": ..}], "dictionary": {..} (optional) }
std::pair<NeuralNetwork, std::optional<FeatureDictionary>> network_from_json(
    const ordered_json& j);
ordered_json network_to_json(const NeuralNetwork& net,
                             const FeatureDictionary* dict = nullptr);
std::pair<NeuralNetwork, std::optional<FeatureDictionary>> load_network(
    const std::string& path);

// ---- dataset files ----
// [ {"input": [..], "label": k}, .. ]
Dataset dataset_from_json(const ordered_json& j);
ordered_json dataset_to_json(const Dataset& dataset);
Dataset load_dataset(const std::string& path);

// ---- context files ----
// {"input": [..]} for networks; plain {name: value} maps for scenarios.
std::vector<double> input_context_from_json(const ordered_json& j);
ordered_json input_context_to_json(const std::vector<double>& input);

Value value_from_json(const ordered_json& j);
ordered_json value_to_json(const Value& v);
Assignment assignment_from_json(const ordered_json& j);
ordered_json assignment_to_json(const Assignment& a);

// ---- reports ----
ordered_json verdict_to_json(const DependenceVerdict& v);
ordered_json overdetermination_to_json(const OverdeterminationReport& r);
ordered_json preemption_to_json(const PreemptionReport& r);
ordered_json condition_report_to_json(const ConditionReport& r);
ordered_json effect_table_to_json(const EffectTable& t);
std::string effect_table_to_csv(const EffectTable& t);

// ---- plumbing ----
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
ordered_json load_json(const std::string& path);

}  // namespace causalprobe

#endif
