// causalprobe: counterfactual causal analysis of structural causal models
// and toy neural networks from the command line.

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "causalprobe/circuit.hpp"
#include "causalprobe/circuit_export.hpp"
#include "causalprobe/compile.hpp"
#include "causalprobe/dependence.hpp"
#include "causalprobe/errors.hpp"
#include "causalprobe/serialize.hpp"
#include "causalprobe/train.hpp"

namespace cp = causalprobe;
using cp::ordered_json;

namespace {

bool color_enabled() {
  if (std::getenv("NO_COLOR")) return false;
  return isatty(fileno(stdout));
}

std::string paint(const std::string& text, const char* code) {
  if (!color_enabled()) return text;
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

std::string green(const std::string& t) { return paint(t, "32"); }
std::string red(const std::string& t) { return paint(t, "31"); }

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

// Common per-command settings.
struct Output {
  std::string format = "text";  // text | json | csv | dot (where applicable)
  std::string out_path;         // file destination; stdout when empty
  bool no_timestamp = false;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd, bool with_seed = true) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv", "dot"}));
    cmd->add_option("-o,--out", out_path, "Write the report to this path");
    cmd->add_flag("--no-timestamp", no_timestamp,
                  "Omit the timestamp field from reports");
    if (with_seed)
      cmd->add_option("--seed", seed, "Seed for all derived randomness");
  }

  void emit(const std::string& command, ordered_json config,
            ordered_json result, const std::string& text_form) const {
    config["seed"] = seed;
    ordered_json report;
    report["format_version"] = 1;
    report["command"] = command;
    report["config"] = std::move(config);
    if (!no_timestamp) report["timestamp"] = iso_timestamp();
    report["result"] = std::move(result);
    std::string json_form = report.dump(2) + "\n";

    const std::string& chosen = format == "json" ? json_form : text_form;
    if (!out_path.empty()) cp::write_text_file(out_path, chosen);
    std::cout << chosen;
  }
};

cp::Value parse_value_text(const std::string& text) {
  if (text == "true") return cp::Value(true);
  if (text == "false") return cp::Value(false);
  try {
    std::size_t used = 0;
    double d = std::stod(text, &used);
    if (used == text.size()) return cp::Value(d);
  } catch (const std::exception&) {
  }
  return cp::Value(text);
}

// "name=value" pairs from --set/--do.
std::pair<std::string, cp::Value> parse_binding(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw cp::ValidationError("expected name=value, got '" + text + "'");
  return {text.substr(0, eq), parse_value_text(text.substr(eq + 1))};
}

// Flag values arrive untyped; bend 0/1 onto booleans and booleans onto
// reals so "--set A=1" works on a boolean A.
cp::Value coerce_to_domain(const cp::Domain& domain, cp::Value v) {
  if (domain.kind() == cp::Domain::Kind::Bool && cp::is_real(v)) {
    double d = std::get<double>(v);
    if (d == 0.0) return cp::Value(false);
    if (d == 1.0) return cp::Value(true);
  }
  if (domain.kind() == cp::Domain::Kind::Real && cp::is_bool(v))
    return cp::Value(std::get<bool>(v) ? 1.0 : 0.0);
  return v;
}

cp::Value coerce_for(const cp::CausalGraph& graph, const std::string& name,
                     cp::Value v) {
  if (!graph.has_variable(name)) return v;
  return coerce_to_domain(graph.variable(name).domain, std::move(v));
}

// Event specs: "B", "B=true", "B>=0.5", "B<0.3", ...
struct EventSpec {
  std::string variable;
  std::optional<cp::Event> event;  // absent: use the factual value
};

EventSpec parse_event_spec(const std::string& text) {
  static const std::pair<const char*, cp::Event::Rel> rels[] = {
      {">=", cp::Event::Rel::Ge},
      {"<=", cp::Event::Rel::Le},
      {">", cp::Event::Rel::Gt},
      {"<", cp::Event::Rel::Lt},
  };
  for (const auto& [op, rel] : rels) {
    auto pos = text.find(op);
    if (pos != std::string::npos && pos > 0) {
      std::string name = text.substr(0, pos);
      double bound = std::stod(text.substr(pos + std::strlen(op)));
      return {name, cp::Event::threshold(name, rel, bound)};
    }
  }
  auto eq = text.find('=');
  if (eq != std::string::npos && eq > 0) {
    std::string name = text.substr(0, eq);
    return {name, cp::Event::equals(name, parse_value_text(text.substr(eq + 1)))};
  }
  return {text, std::nullopt};
}

// File dispatch: scenario files carry "variables", network files "layers".
bool is_network_file(const ordered_json& j) {
  return j.is_object() && j.contains("layers");
}

struct LoadedScenario {
  cp::Scenario scenario;
  cp::CausalGraph graph;
  cp::Assignment context;
};

LoadedScenario load_scenario_with_context(
    const std::string& path, const std::vector<std::string>& sets) {
  LoadedScenario out;
  out.scenario = cp::load_scenario(path);
  out.graph = cp::build_graph(out.scenario.variables, out.scenario.equations);
  out.context = out.scenario.context;
  for (const std::string& s : sets) {
    auto [name, value] = parse_binding(s);
    out.context.set(name, value);
  }
  return out;
}

cp::Event resolve_event(const EventSpec& spec, const cp::CausalGraph& graph,
                        const cp::Assignment& factual) {
  graph.index_of(spec.variable);
  if (spec.event) return *spec.event;
  return cp::Event::equals(spec.variable, factual.at(spec.variable));
}

// Default ablation value per domain: false / interval-clamped 0 / error.
cp::Value default_ablation_value(const cp::Domain& domain,
                                 const std::string& name) {
  switch (domain.kind()) {
    case cp::Domain::Kind::Bool: return cp::Value(false);
    case cp::Domain::Kind::Real: {
      double v = std::clamp(0.0, domain.lo(), domain.hi());
      return cp::Value(v);
    }
    case cp::Domain::Kind::Finite:
      throw cp::ValidationError("candidate '" + name +
                                "' has a finite-set domain; pass --ablate-to");
  }
  throw cp::ValidationError("unreachable");
}

// ---- metric flags for network commands ----

cp::TargetMetric parse_metric_flag(const std::string& text,
                                   const cp::NeuralNetwork& net) {
  if (text.empty()) {
    if (net.output_width() == 1)
      return cp::TargetMetric::node_activation(
          cp::NodeRef::neuron(static_cast<int>(net.layer_count()) - 1, 0),
          +1.0);
    throw cp::ValidationError(
        "network has several outputs; pass --metric (logit-diff:c,i | "
        "neg-log-prob:t | node:name[,sign])");
  }
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "logit-diff") {
    auto comma = args.find(',');
    if (comma == std::string::npos)
      throw cp::ValidationError("--metric logit-diff needs correct,incorrect");
    return cp::TargetMetric::logit_difference(
        std::stoi(args.substr(0, comma)), std::stoi(args.substr(comma + 1)));
  }
  if (kind == "neg-log-prob")
    return cp::TargetMetric::negative_log_probability(std::stoi(args));
  if (kind == "node") {
    auto comma = args.find(',');
    std::string name = comma == std::string::npos ? args : args.substr(0, comma);
    double sign =
        comma == std::string::npos ? -1.0 : std::stod(args.substr(comma + 1));
    return cp::TargetMetric::node_activation(cp::NodeRef::parse(name), sign);
  }
  throw cp::ValidationError("unknown metric '" + text + "'");
}

cp::AblationKind parse_kind_flag(const std::string& text,
                                 const std::string& dataset_path,
                                 std::uint64_t seed) {
  if (text == "zero" || text.empty()) return cp::AblationKind::zero();
  if (text == "mean" || text == "resample") {
    if (dataset_path.empty())
      throw cp::ValidationError("--kind " + text +
                                " needs a reference dataset (--reference)");
    auto ref = std::make_shared<cp::Dataset>(cp::load_dataset(dataset_path));
    return text == "mean" ? cp::AblationKind::mean(ref)
                          : cp::AblationKind::resample(ref, seed);
  }
  throw cp::ValidationError("unknown ablation kind '" + text + "'");
}

cp::Dataset load_context_or_dataset(const std::string& path) {
  ordered_json j = cp::load_json(path);
  if (j.is_array()) return cp::dataset_from_json(j);
  cp::Dataset d;
  d.examples.push_back({cp::input_context_from_json(j), 0});
  return d;
}

// ---- subcommand payloads ----

struct EvalArgs {
  std::string scenario_path;
  std::vector<std::string> sets;
  std::vector<std::string> dos;
  Output output;
};

int cmd_eval(const EvalArgs& args) {
  LoadedScenario loaded =
      load_scenario_with_context(args.scenario_path, args.sets);
  cp::InterventionSpec spec;
  for (const std::string& d : args.dos) {
    auto [name, value] = parse_binding(d);
    spec.force(name, value);
  }
  cp::Assignment world = cp::evaluate(loaded.graph, loaded.context, spec);

  std::ostringstream text;
  text << "world (" << args.scenario_path << ")\n";
  for (const auto& v : loaded.graph.variables()) {
    text << "  " << std::left << std::setw(12) << v.name << " = "
         << cp::format_value(world.at(v.name));
    if (spec.find(v.name)) text << "   [do]";
    text << "\n";
  }

  ordered_json config;
  config["scenario"] = args.scenario_path;
  config["set"] = args.sets;
  config["do"] = args.dos;
  ordered_json result;
  result["world"] = cp::assignment_to_json(world);
  args.output.emit("eval", std::move(config), std::move(result), text.str());
  return 0;
}

struct DependArgs {
  std::string scenario_path;
  std::string cause;
  std::string alt;
  std::string effect;
  double epsilon = -1.0;  // <0: default 0.1 x |factual|
  std::vector<std::string> sets;
  bool chain = false;
  Output output;
};

int cmd_depend(const DependArgs& args) {
  LoadedScenario loaded =
      load_scenario_with_context(args.scenario_path, args.sets);
  cp::Assignment factual = cp::evaluate(loaded.graph, loaded.context);

  EventSpec cause_spec = parse_event_spec(args.cause);
  EventSpec effect_spec = parse_event_spec(args.effect);
  cp::CauseSpec cause{resolve_event(cause_spec, loaded.graph, factual),
                      std::nullopt};
  if (!args.alt.empty()) cause.alternate = parse_value_text(args.alt);
  cp::Event effect = resolve_event(effect_spec, loaded.graph, factual);

  std::optional<double> epsilon;
  if (args.epsilon >= 0.0) epsilon = args.epsilon;

  ordered_json config;
  config["scenario"] = args.scenario_path;
  config["cause"] = cause_spec.variable;
  config["effect"] = effect_spec.variable;
  config["set"] = args.sets;

  std::ostringstream text;
  ordered_json result;
  if (args.chain) {
    auto chain = cp::causal_chain(loaded.graph, loaded.context,
                                  cause.actual, effect, epsilon);
    result["chain_found"] = chain.has_value();
    ordered_json names = ordered_json::array();
    if (chain) {
      for (const cp::Event& e : *chain) names.push_back(e.variable);
      text << "causal chain: ";
      for (std::size_t i = 0; i < chain->size(); ++i)
        text << (i ? " -> " : "") << (*chain)[i].variable;
      text << "\n";
    } else {
      text << "no causal chain\n";
    }
    result["chain"] = std::move(names);
  } else {
    cp::DependenceVerdict v =
        cp::causal_dependence(loaded.graph, loaded.context, cause, effect,
                              epsilon);
    result = cp::verdict_to_json(v);
    text << "dependence of (" << effect.describe() << ") on ("
         << cause.actual.describe() << ")\n"
         << "  condition (i)  factual:        "
         << (v.condition_i ? "holds" : "fails") << "\n"
         << "  condition (ii) counterfactual: "
         << (v.condition_ii ? "holds" : "fails") << "\n"
         << "  effect delta: " << cp::format_real(v.effect_delta)
         << " (epsilon " << cp::format_real(v.epsilon) << ")\n"
         << "  verdict: "
         << (v.holds ? green("causal dependence holds")
                     : red("no causal dependence"))
         << "\n";
  }
  args.output.emit(args.chain ? "chain" : "depend", std::move(config),
                   std::move(result), text.str());
  return 0;
}

struct SearchArgs {
  std::string path;
  std::string effect;
  std::string metric;
  std::vector<std::string> candidates;
  std::vector<std::string> sets;
  double epsilon = 0.5;
  std::size_t k_max = 2;
  std::size_t max_rounds = 5;
  std::string mode = "exhaustive";
  Output output;
};

// The loaded scenario/network must outlive the system reading it.
struct SystemHolder {
  std::unique_ptr<cp::AblationSystem> system;
  // Owners:
  std::shared_ptr<LoadedScenario> scenario;
  std::shared_ptr<cp::NeuralNetwork> net;
  std::shared_ptr<cp::FeatureDictionary> dict;
};

SystemHolder build_system(const SearchArgs& args) {
  SystemHolder holder;
  ordered_json j = cp::load_json(args.path);
  if (is_network_file(j)) {
    auto [net, dict] = cp::network_from_json(j);
    holder.net = std::make_shared<cp::NeuralNetwork>(std::move(net));
    if (dict)
      holder.dict = std::make_shared<cp::FeatureDictionary>(std::move(*dict));
    cp::TargetMetric metric = parse_metric_flag(args.metric, *holder.net);

    std::vector<cp::NodeRef> candidates;
    if (args.candidates.empty()) {
      for (std::size_t i = 0; i < holder.net->input_width(); ++i)
        candidates.push_back(cp::NodeRef::input(static_cast<int>(i)));
    } else {
      for (const std::string& name : args.candidates)
        candidates.push_back(cp::NodeRef::parse(name));
    }

    std::vector<std::vector<double>> inputs;
    if (args.sets.empty())
      throw cp::ValidationError("network analysis needs --context <file>");
    inputs.push_back(
        cp::input_context_from_json(cp::load_json(args.sets.front())));
    holder.system = std::make_unique<cp::NetworkAblationSystem>(
        *holder.net, holder.dict.get(), std::move(inputs),
        std::move(candidates), cp::AblationKind::zero(), metric);
    return holder;
  }

  holder.scenario = std::make_shared<LoadedScenario>(
      load_scenario_with_context(args.path, args.sets));
  cp::Assignment factual =
      cp::evaluate(holder.scenario->graph, holder.scenario->context);
  EventSpec effect_spec = parse_event_spec(args.effect);
  cp::Event metric_event =
      resolve_event(effect_spec, holder.scenario->graph, factual);

  std::vector<std::string> names = args.candidates;
  if (names.empty()) {
    names = holder.scenario->graph.exogenous_names();
    names.erase(std::remove(names.begin(), names.end(), effect_spec.variable),
                names.end());
  }
  std::vector<std::pair<std::string, cp::Value>> candidates;
  for (const std::string& name : names)
    candidates.emplace_back(
        name, default_ablation_value(
                  holder.scenario->graph.variable(name).domain, name));
  holder.system = std::make_unique<cp::GraphAblationSystem>(
      holder.scenario->graph, holder.scenario->context, std::move(candidates),
      metric_event);
  return holder;
}

int cmd_overdet(const SearchArgs& args) {
  SystemHolder holder = build_system(args);
  cp::SearchMode mode = args.mode == "greedy" ? cp::SearchMode::Greedy
                                              : cp::SearchMode::Exhaustive;
  cp::OverdeterminationReport report = cp::find_minimal_ablation_sets(
      *holder.system, args.epsilon, args.k_max, mode);

  std::ostringstream text;
  text << "overdetermination search (" << args.path << ", epsilon "
       << cp::format_real(args.epsilon) << ", k_max "
       << std::to_string(report.k_max) << ", " << args.mode << ")\n";
  text << "  singleton effects:\n";
  for (const auto& [name, d] : report.singleton_effects)
    text << "    " << std::left << std::setw(12) << name << " "
         << cp::format_real(d) << "\n";
  if (report.minimal_sets.empty()) {
    text << "  no set moves the metric beyond epsilon\n";
  } else {
    text << "  minimal sets:\n";
    for (const auto& s : report.minimal_sets) {
      text << "    {";
      for (std::size_t i = 0; i < s.nodes.size(); ++i)
        text << (i ? ", " : "") << s.nodes[i];
      text << "}  delta " << cp::format_real(s.effect_delta) << "\n";
    }
  }
  for (const std::string& w : report.warnings) text << "  warning: " << w << "\n";

  ordered_json config;
  config["input"] = args.path;
  config["effect"] = args.effect;
  config["epsilon"] = args.epsilon;
  config["k_max"] = args.k_max;
  config["mode"] = args.mode;
  args.output.emit("overdet", std::move(config),
                   cp::overdetermination_to_json(report), text.str());
  return 0;
}

int cmd_preempt(const SearchArgs& args) {
  SystemHolder holder = build_system(args);
  cp::PreemptionReport report =
      cp::detect_preemption(*holder.system, args.epsilon, args.max_rounds);

  std::ostringstream text;
  text << "preemption rounds (" << args.path << ", epsilon "
       << cp::format_real(args.epsilon) << ")\n";
  for (std::size_t r = 0; r < report.rounds.size(); ++r) {
    const auto& round = report.rounds[r];
    text << "  round " << (r + 1) << ": ";
    if (round.discovered.empty()) {
      text << "nothing new (fixpoint)";
    } else {
      text << "discovered {";
      for (std::size_t i = 0; i < round.discovered.size(); ++i)
        text << (i ? ", " : "") << round.discovered[i];
      text << "}";
    }
    if (!round.ablated_before.empty()) {
      text << "  [ablated: ";
      for (std::size_t i = 0; i < round.ablated_before.size(); ++i)
        text << (i ? ", " : "") << round.ablated_before[i];
      text << "]";
    }
    text << "\n";
  }

  ordered_json config;
  config["input"] = args.path;
  config["effect"] = args.effect;
  config["epsilon"] = args.epsilon;
  config["max_rounds"] = args.max_rounds;
  args.output.emit("preempt", std::move(config),
                   cp::preemption_to_json(report), text.str());
  return 0;
}

struct TransitivityArgs {
  std::string scenario_path;
  std::string a, b, c;
  std::vector<std::string> witness;  // a1 a2 b1 b2 c1 c2
  bool search = false;
  bool sufficient = false;
  Output output;
};

int cmd_transitivity(const TransitivityArgs& args) {
  LoadedScenario loaded = load_scenario_with_context(args.scenario_path, {});
  const cp::CausalGraph& graph = loaded.graph;

  std::ostringstream text;
  ordered_json result;

  static const char* five_names[] = {
      "1. do(A=a1) entails B=b1", "2. do(B=b1) entails C=c1",
      "3. c1 != c2", "4. do(A=a2) entails B=b2",
      "5. do(A=a2, B=b2) entails C=c2"};

  if (args.sufficient) {
    cp::ConditionReport r =
        cp::check_sufficient_conditions(graph, args.a, args.b, args.c);
    result = cp::condition_report_to_json(r);
    text << "sufficient conditions for transitivity\n";
    text << "  condition 1 (B-value surjectivity under do(A)): "
         << (r.condition_results[0] ? "holds" : "fails") << "\n";
    text << "  condition 2 (B is a causal bottleneck A->C):   "
         << (r.condition_results[1] ? "holds" : "fails") << "\n";
    text << "  verdict: "
         << (r.verdict == cp::ConditionReport::Verdict::Transitive
                 ? green("transitive")
                 : red("not-established"))
         << "\n";
  } else {
    std::optional<cp::TransitivityWitness> witness;
    if (args.search) {
      witness = cp::find_transitivity_witness(graph, args.a, args.b, args.c);
      if (!witness) {
        result["verdict"] = "not-established";
        result["witness_found"] = false;
        text << "no witness passes all five conditions\n";
        args.output.emit("transitivity", ordered_json::object(),
                         std::move(result), text.str());
        return 0;
      }
    } else {
      if (args.witness.size() != 6)
        throw cp::ValidationError(
            "pass --witness a1,a2,b1,b2,c1,c2 or --search");
      witness = cp::TransitivityWitness{parse_value_text(args.witness[0]),
                                        parse_value_text(args.witness[1]),
                                        parse_value_text(args.witness[2]),
                                        parse_value_text(args.witness[3]),
                                        parse_value_text(args.witness[4]),
                                        parse_value_text(args.witness[5])};
    }
    cp::ConditionReport r =
        cp::check_halpern_conditions(graph, args.a, args.b, args.c, *witness);
    result = cp::condition_report_to_json(r);
    result["witness_found"] = true;
    text << "Halpern conditions on (" << args.a << ", " << args.b << ", "
         << args.c << ")\n";
    for (int i = 0; i < 5; ++i)
      text << "  condition " << five_names[i] << ": "
           << (r.condition_results[i] ? "holds" : "fails") << "\n";
    text << "  verdict: "
         << (r.verdict == cp::ConditionReport::Verdict::Transitive
                 ? green("transitive")
                 : red("not-established"))
         << "\n";
  }

  ordered_json config;
  config["scenario"] = args.scenario_path;
  config["a"] = args.a;
  config["b"] = args.b;
  config["c"] = args.c;
  config["search"] = args.search;
  config["sufficient"] = args.sufficient;
  args.output.emit("transitivity", std::move(config), std::move(result),
                   text.str());
  return 0;
}

struct CircuitArgs {
  std::string net_path;
  std::string data_path;
  std::string metric;
  std::string estimator = "exact";
  std::string kind = "zero";
  std::string reference_path;
  double t_n = 0.4;
  double t_e = 0.04;
  bool signed_mode = false;
  std::string expand_anchor;
  std::size_t set_search = 0;
  bool preempt_rounds = false;
  Output output;
};

int cmd_circuit(const CircuitArgs& args) {
  auto [net, dict_opt] = cp::load_network(args.net_path);
  const cp::FeatureDictionary* dict =
      dict_opt.has_value() ? &*dict_opt : nullptr;
  cp::Dataset dataset = load_context_or_dataset(args.data_path);
  cp::TargetMetric metric = parse_metric_flag(args.metric, net);

  cp::DiscoveryOptions options;
  options.t_n = args.t_n;
  options.t_e = args.t_e;
  options.signed_mode = args.signed_mode;
  options.estimator = cp::Estimator::from_tag(args.estimator);
  options.kind =
      parse_kind_flag(args.kind, args.reference_path, args.output.seed);
  options.granularity =
      dict ? cp::Granularity::Features : cp::Granularity::Neurons;

  cp::Circuit circuit;
  if (args.set_search > 0 || args.preempt_rounds) {
    cp::SetSearchOptions search;
    search.k_max = args.set_search > 0 ? args.set_search : 1;
    search.preemption_rounds = args.preempt_rounds;
    circuit =
        cp::discover_with_set_search(net, dict, dataset, metric, options, search);
  } else {
    circuit = cp::discover_circuit(net, dict, dataset, metric, options);
  }
  if (!args.expand_anchor.empty())
    circuit = cp::expand_local_dependencies(net, dict, circuit,
                                            args.expand_anchor, dataset,
                                            args.t_n, options.estimator,
                                            options.kind);

  cp::Faithfulness faith = cp::circuit_faithfulness(net, dict, circuit,
                                                    dataset, metric,
                                                    options.kind);

  std::string json_form = cp::export_circuit_json(circuit);
  std::string base = args.output.out_path.empty() ? std::string("circuit")
                                                  : args.output.out_path;
  cp::write_text_file(base + ".json", json_form);
  cp::write_text_file(base + ".dot", cp::export_circuit_dot(circuit));
  cp::write_text_file(base + "_nodes.csv", cp::circuit_nodes_csv(circuit));
  cp::write_text_file(base + "_edges.csv", cp::circuit_edges_csv(circuit));

  std::ostringstream text;
  text << "circuit: " << circuit.nodes.size() << " nodes, "
       << circuit.edges.size() << " edges (T_N "
       << cp::format_real(circuit.t_n) << ", T_E "
       << cp::format_real(circuit.t_e) << ", " << circuit.method << ")\n";
  for (const cp::CircuitNode& n : circuit.nodes) {
    text << "  " << std::left << std::setw(10) << n.name << " "
         << std::setw(12) << cp::format_real(n.score) << " "
         << cp::provenance_name(n.provenance);
    if (!n.anchor.empty()) text << " (anchor " << n.anchor << ")";
    if (!n.set_members.empty()) {
      text << " {";
      for (std::size_t i = 0; i < n.set_members.size(); ++i)
        text << (i ? ", " : "") << n.set_members[i];
      text << "}";
    }
    if (n.round > 0) text << " (round " << n.round << ")";
    text << "\n";
  }
  text << "faithfulness: "
       << (faith.defined
               ? cp::format_real(faith.retention) + " (raw " +
                     cp::format_real(faith.raw_ratio) + ")"
               : std::string("undefined (zero full-model metric)"))
       << "\n";
  text << "wrote " << base << ".json, .dot, _nodes.csv, _edges.csv\n";
  std::cout << text.str();
  return 0;
}

struct IeCompareArgs {
  std::string net_path;
  std::string data_path;
  std::string metric;
  std::string kind = "zero";
  std::string reference_path;
  int steps = 16;
  Output output;
};

int cmd_ie_compare(const IeCompareArgs& args) {
  auto [net, dict_opt] = cp::load_network(args.net_path);
  const cp::FeatureDictionary* dict =
      dict_opt.has_value() ? &*dict_opt : nullptr;
  cp::Dataset dataset = load_context_or_dataset(args.data_path);
  cp::TargetMetric metric = parse_metric_flag(args.metric, net);
  cp::AblationKind kind =
      parse_kind_flag(args.kind, args.reference_path, args.output.seed);
  cp::Granularity granularity =
      dict ? cp::Granularity::Features : cp::Granularity::Neurons;

  cp::EffectTable exact = cp::effect_sweep(net, dict, dataset, kind, metric,
                                           cp::Estimator::exact(), granularity);
  cp::EffectTable linear = cp::effect_sweep(net, dict, dataset, kind, metric,
                                            cp::Estimator::linear(),
                                            granularity);
  cp::EffectTable ig = cp::effect_sweep(
      net, dict, dataset, kind, metric,
      cp::Estimator::integrated_gradients(args.steps), granularity);

  std::string ig_tag = "ig(" + std::to_string(args.steps) + ")";
  std::ostringstream csv;
  csv << "node,exact,linear," << ig_tag << "\n";
  for (std::size_t i = 0; i < exact.nodes.size(); ++i)
    csv << exact.names[i] << "," << cp::format_real(exact.effects[i]) << ","
        << cp::format_real(linear.effects[i]) << ","
        << cp::format_real(ig.effects[i]) << "\n";

  std::ostringstream text;
  text << "indirect effects (" << metric.describe() << ", " << kind.name()
       << " ablation)\n";
  text << "  " << std::left << std::setw(10) << "node" << std::setw(14)
       << "exact" << std::setw(14) << "linear" << std::setw(14) << ig_tag
       << "\n";
  for (std::size_t i = 0; i < exact.nodes.size(); ++i)
    text << "  " << std::left << std::setw(10) << exact.names[i]
         << std::setw(14) << cp::format_real(exact.effects[i]) << std::setw(14)
         << cp::format_real(linear.effects[i]) << std::setw(14)
         << cp::format_real(ig.effects[i]) << "\n";
  for (const std::string& w : exact.warnings) text << "  warning: " << w << "\n";

  ordered_json config;
  config["network"] = args.net_path;
  config["context"] = args.data_path;
  config["steps"] = args.steps;
  config["kind"] = args.kind == "" ? "zero" : args.kind;
  ordered_json result;
  result["exact"] = cp::effect_table_to_json(exact);
  result["linear"] = cp::effect_table_to_json(linear);
  result["integrated_gradients"] = cp::effect_table_to_json(ig);

  if (args.output.format == "csv") {
    if (!args.output.out_path.empty())
      cp::write_text_file(args.output.out_path, csv.str());
    std::cout << csv.str();
    return 0;
  }
  args.output.emit("ie-compare", std::move(config), std::move(result),
                   text.str());
  return 0;
}

struct GenArgs {
  std::string generator;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t steps = 5000;
  double learning_rate = 0.1;
};

int cmd_gen(const GenArgs& args) {
  std::string dir = args.out_dir;
  if (!dir.empty() && dir.back() == '/') dir.pop_back();
  auto path = [&](const std::string& name) { return dir + "/" + name; };

  auto write_generated = [&](const std::string& name,
                             const cp::GeneratedNet& g,
                             const cp::Scenario& scenario) {
    cp::write_text_file(path(name + "_net.json"),
                        cp::network_to_json(g.net).dump(2) + "\n");
    ordered_json ctx = cp::input_context_to_json(g.canonical_input);
    ctx["epsilon"] = g.epsilon;
    ordered_json nodes = ordered_json::object();
    for (const auto& [story, ref] : g.named_nodes) nodes[story] = ref.name();
    ctx["named_nodes"] = std::move(nodes);
    ctx["description"] = g.description;
    cp::write_text_file(path(name + "_context.json"), ctx.dump(2) + "\n");
    cp::write_text_file(path(name + "_scenario.json"),
                        cp::scenario_to_json(scenario).dump(2) + "\n");
    std::cout << "wrote " << name << "_net.json, " << name
              << "_context.json, " << name << "_scenario.json in " << dir
              << "\n";
  };

  if (args.generator == "overdetermined") {
    write_generated("overdetermined", cp::make_overdetermined_net(),
                    cp::rocks_scenario());
    return 0;
  }
  if (args.generator == "preemption") {
    write_generated("preemption", cp::make_preemption_net(),
                    cp::preemption_scenario());
    return 0;
  }
  if (args.generator == "nontransitive") {
    write_generated("nontransitive", cp::make_nontransitive_net(),
                    cp::hiker_scenario());
    return 0;
  }
  if (args.generator == "succession") {
    cp::Dataset data = cp::make_succession_task(args.seed);
    cp::write_text_file(path("succession_dataset.json"),
                        cp::dataset_to_json(data).dump() + "\n");
    cp::NeuralNetwork net = cp::make_succession_net(args.seed);
    cp::TrainResult trained =
        cp::train(net, data, args.steps, args.learning_rate, args.seed);
    cp::write_text_file(path("succession_net.json"),
                        cp::network_to_json(trained.net).dump(2) + "\n");
    cp::write_text_file(
        path("succession_context.json"),
        cp::input_context_to_json(data.examples.front().input).dump(2) + "\n");
    std::cout << "wrote succession_dataset.json, succession_net.json "
                 "(trained to loss "
              << cp::format_real(trained.final_loss) << ", accuracy "
              << cp::format_real(trained.accuracy)
              << "), succession_context.json in " << dir << "\n";
    return 0;
  }
  throw cp::ValidationError(
      "unknown generator '" + args.generator +
      "' (valid: overdetermined, preemption, nontransitive, succession)");
}

struct ExportArgs {
  std::string circuit_path;
  Output output;
};

int cmd_export(const ExportArgs& args) {
  cp::Circuit circuit =
      cp::parse_circuit_json(cp::read_text_file(args.circuit_path));
  std::string body;
  if (args.output.format == "dot")
    body = cp::export_circuit_dot(circuit);
  else if (args.output.format == "csv")
    body = cp::circuit_nodes_csv(circuit) + "\n" + cp::circuit_edges_csv(circuit);
  else
    body = cp::export_circuit_json(circuit);
  if (!args.output.out_path.empty())
    cp::write_text_file(args.output.out_path, body);
  std::cout << body;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causalprobe: counterfactual interventions, overdetermination "
               "and preemption discovery, transitivity checks, and circuit "
               "extraction on toy models"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a scenario world");
  eval->add_option("scenario", eval_args.scenario_path, "Scenario JSON file")
      ->required();
  eval->add_option("--set", eval_args.sets, "Exogenous values, name=value");
  eval->add_option("--do", eval_args.dos, "Interventions, name=value");
  eval_args.output.attach(eval);

  DependArgs depend_args;
  CLI::App* depend =
      app.add_subcommand("depend", "Check Lewis causal dependence");
  depend->add_option("scenario", depend_args.scenario_path, "Scenario file")
      ->required();
  depend->add_option("--cause", depend_args.cause,
                     "Cause variable or event (A, A=v)")
      ->required();
  depend->add_option("--alt", depend_args.alt, "Alternate value for the cause");
  depend->add_option("--effect", depend_args.effect,
                     "Effect variable or event (C, C=v, C>=x)")
      ->required();
  depend->add_option("--epsilon", depend_args.epsilon,
                     "Real-effect threshold (default 0.1 x |factual|)");
  depend->add_option("--set", depend_args.sets, "Exogenous values");
  depend->add_flag("--chain", depend_args.chain,
                   "Search for a stepwise causal chain instead");
  depend_args.output.attach(depend);

  SearchArgs overdet_args;
  CLI::App* overdet =
      app.add_subcommand("overdet", "Search minimal ablation sets");
  overdet->add_option("input", overdet_args.path, "Scenario or network file")
      ->required();
  overdet->add_option("--effect", overdet_args.effect,
                      "Effect variable/event (scenario inputs)");
  overdet->add_option("--metric", overdet_args.metric,
                      "Target metric (network inputs)");
  overdet->add_option("--candidates", overdet_args.candidates,
                      "Candidate nodes (default: exogenous/inputs)");
  overdet->add_option("--set,--context", overdet_args.sets,
                      "Exogenous values or context file");
  overdet->add_option("--epsilon", overdet_args.epsilon, "Effect threshold");
  overdet->add_option("--kmax", overdet_args.k_max, "Largest subset size");
  overdet->add_option("--mode", overdet_args.mode, "exhaustive | greedy")
      ->check(CLI::IsMember({"exhaustive", "greedy"}));
  overdet_args.output.attach(overdet);

  SearchArgs preempt_args;
  CLI::App* preempt =
      app.add_subcommand("preempt", "Iterated-ablation preemption rounds");
  preempt->add_option("input", preempt_args.path, "Scenario or network file")
      ->required();
  preempt->add_option("--effect", preempt_args.effect, "Effect variable/event");
  preempt->add_option("--metric", preempt_args.metric,
                      "Target metric (network inputs)");
  preempt->add_option("--candidates", preempt_args.candidates,
                      "Candidate nodes");
  preempt->add_option("--set,--context", preempt_args.sets,
                      "Exogenous values or context file");
  preempt->add_option("--epsilon", preempt_args.epsilon, "Effect threshold");
  preempt->add_option("--max-rounds", preempt_args.max_rounds, "Round cap");
  preempt_args.output.attach(preempt);

  TransitivityArgs trans_args;
  CLI::App* trans = app.add_subcommand(
      "transitivity", "Halpern transitivity conditions and bottlenecks");
  trans->add_option("scenario", trans_args.scenario_path, "Scenario file")
      ->required();
  trans->add_option("--a", trans_args.a, "Variable A")->required();
  trans->add_option("--b", trans_args.b, "Variable B")->required();
  trans->add_option("--c", trans_args.c, "Variable C")->required();
  trans->add_option("--witness", trans_args.witness,
                    "Witness values a1 a2 b1 b2 c1 c2")
      ->expected(6)
      ->delimiter(',');
  trans->add_flag("--search", trans_args.search,
                  "Brute-force the first passing witness");
  trans->add_flag("--sufficient", trans_args.sufficient,
                  "Check the sufficient pair instead of the five conditions");
  trans_args.output.attach(trans);

  CircuitArgs circuit_args;
  CLI::App* circuit =
      app.add_subcommand("circuit", "Discover and export a causal circuit");
  circuit->add_option("network", circuit_args.net_path, "Network JSON file")
      ->required();
  circuit->add_option("context", circuit_args.data_path,
                      "Context ({\"input\": [..]}) or dataset file")
      ->required();
  circuit->add_option("--metric", circuit_args.metric, "Target metric");
  circuit->add_option("--tn", circuit_args.t_n, "Node threshold T_N");
  circuit->add_option("--te", circuit_args.t_e, "Edge threshold T_E");
  circuit->add_option("--estimator", circuit_args.estimator,
                      "exact | linear | ig:steps");
  circuit->add_option("--kind", circuit_args.kind,
                      "Ablation kind: zero | mean | resample");
  circuit->add_option("--reference", circuit_args.reference_path,
                      "Reference dataset for mean/resample");
  circuit->add_flag("--signed", circuit_args.signed_mode,
                    "Threshold signed effects instead of magnitudes");
  circuit->add_option("--expand", circuit_args.expand_anchor,
                      "Expand local dependencies anchored at this node");
  circuit->add_option("--set-search", circuit_args.set_search,
                      "Admit minimal ablation sets up to this size");
  circuit->add_flag("--preempt-rounds", circuit_args.preempt_rounds,
                    "Admit nodes surfacing in preemption rounds");
  circuit_args.output.attach(circuit);

  IeCompareArgs ie_args;
  CLI::App* ie = app.add_subcommand(
      "ie-compare", "Tabulate exact vs linear vs integrated-gradients IE");
  ie->add_option("network", ie_args.net_path, "Network JSON file")->required();
  ie->add_option("context", ie_args.data_path, "Context or dataset file")
      ->required();
  ie->add_option("--metric", ie_args.metric, "Target metric");
  ie->add_option("--kind", ie_args.kind, "Ablation kind");
  ie->add_option("--reference", ie_args.reference_path,
                 "Reference dataset for mean/resample");
  ie->add_option("--steps", ie_args.steps, "Integrated-gradient steps");
  ie_args.output.attach(ie);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate toy models with planted pathologies");
  gen->add_option("generator", gen_args.generator,
                  "overdetermined | preemption | nontransitive | succession")
      ->required();
  gen->add_option("outdir", gen_args.out_dir, "Output directory")->required();
  gen->add_option("--seed", gen_args.seed, "Seed");
  gen->add_option("--steps", gen_args.steps,
                  "Training steps (succession only)");
  gen->add_option("--lr", gen_args.learning_rate,
                  "Learning rate (succession only)");

  ExportArgs export_args;
  CLI::App* exp =
      app.add_subcommand("export", "Re-export a circuit JSON file");
  exp->add_option("circuit", export_args.circuit_path, "Circuit JSON file")
      ->required();
  export_args.output.attach(exp, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*eval) return cmd_eval(eval_args);
    if (*depend) return cmd_depend(depend_args);
    if (*overdet) return cmd_overdet(overdet_args);
    if (*preempt) return cmd_preempt(preempt_args);
    if (*trans) return cmd_transitivity(trans_args);
    if (*circuit) return cmd_circuit(circuit_args);
    if (*ie) return cmd_ie_compare(ie_args);
    if (*gen) return cmd_gen(gen_args);
    if (*exp) return cmd_export(export_args);
  } catch (const cp::CapExceededError& e) {
    std::cerr << "error (cap exceeded): " << e.what() << "\n";
    return 2;
  } catch (const cp::DivergenceError& e) {
    std::cerr << "error (diverged): " << e.what() << "\n";
    return 2;
  } catch (const cp::EvalError& e) {
    std::cerr << "error (evaluation): " << e.what() << "\n";
    return 2;
  } catch (const cp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
