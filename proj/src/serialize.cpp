#include "causalprobe/serialize.hpp"

#include <fstream>
#include <sstream>

#include "causalprobe/errors.hpp"

namespace causalprobe {

namespace {

Domain domain_from_json(const ordered_json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "bool") return Domain::boolean();
    throw ValidationError("unknown domain '" + j.get<std::string>() + "'");
  }
  if (j.is_object()) {
    if (j.contains("set"))
      return Domain::finite(j["set"].get<std::vector<std::string>>());
    if (j.contains("real")) {
      auto bounds = j["real"].get<std::vector<double>>();
      if (bounds.size() != 2)
        throw ValidationError("real domain needs [lo, hi]");
      return Domain::real_interval(bounds[0], bounds[1]);
    }
  }
  throw ValidationError("malformed domain");
}

ordered_json domain_to_json(const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::Bool:
      return "bool";
    case Domain::Kind::Finite: {
      ordered_json j;
      j["set"] = d.labels();
      return j;
    }
    case Domain::Kind::Real: {
      ordered_json j;
      j["real"] = {d.lo(), d.hi()};
      return j;
    }
  }
  throw ValidationError("bad domain");
}

}  // namespace

Value value_from_json(const ordered_json& j) {
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number()) return Value(j.get<double>());
  if (j.is_string()) return Value(j.get<std::string>());
  throw ValidationError("value must be a boolean, number, or label string");
}

ordered_json value_to_json(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  if (const double* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

Assignment assignment_from_json(const ordered_json& j) {
  if (!j.is_object()) throw ValidationError("context must be an object");
  Assignment a;
  for (const auto& [name, value] : j.items()) a.set(name, value_from_json(value));
  return a;
}

ordered_json assignment_to_json(const Assignment& a) {
  ordered_json j = ordered_json::object();
  for (const auto& [name, value] : a.values()) j[name] = value_to_json(value);
  return j;
}

Scenario scenario_from_json(const ordered_json& j) {
  Scenario s;
  try {
    for (const auto& var : j.at("variables"))
      s.variables.push_back({var.at("name").get<std::string>(),
                             domain_from_json(var.at("domain"))});
    if (j.contains("equations"))
      for (const auto& eq : j["equations"])
        s.equations.push_back(parse_equation(eq.at("expr").get<std::string>(),
                                             eq.at("target").get<std::string>()));
    if (j.contains("context")) s.context = assignment_from_json(j["context"]);
    if (j.contains("description"))
      s.description = j["description"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed scenario: ") + e.what());
  }
  return s;
}

ordered_json scenario_to_json(const Scenario& scenario) {
  ordered_json j;
  if (!scenario.description.empty()) j["description"] = scenario.description;
  j["variables"] = ordered_json::array();
  for (const Variable& v : scenario.variables) {
    ordered_json var;
    var["name"] = v.name;
    var["domain"] = domain_to_json(v.domain);
    j["variables"].push_back(std::move(var));
  }
  j["equations"] = ordered_json::array();
  for (const StructuralEquation& eq : scenario.equations) {
    ordered_json e;
    e["target"] = eq.target;
    e["expr"] = eq.body.to_string();
    j["equations"].push_back(std::move(e));
  }
  if (scenario.context.size() != 0)
    j["context"] = assignment_to_json(scenario.context);
  return j;
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(load_json(path));
}

std::pair<NeuralNetwork, std::optional<FeatureDictionary>> network_from_json(
    const ordered_json& j) {
  try {
    std::size_t input_width = j.at("input_width").get<std::size_t>();
    std::vector<Layer> layers;
    std::size_t in = input_width;
    for (const auto& jl : j.at("layers")) {
      Layer layer;
      layer.in_width = in;
      auto rows = jl.at("weights").get<std::vector<std::vector<double>>>();
      layer.out_width = rows.size();
      for (const auto& row : rows) {
        if (row.size() != in)
          throw ValidationError("weight row width mismatch");
        layer.weights.insert(layer.weights.end(), row.begin(), row.end());
      }
      layer.bias = jl.at("bias").get<std::vector<double>>();
      layer.activation =
          activation_from_name(jl.at("activation").get<std::string>());
      in = layer.out_width;
      layers.push_back(std::move(layer));
    }
    NeuralNetwork net(input_width, std::move(layers));

    std::optional<FeatureDictionary> dict;
    if (j.contains("dictionary")) {
      const auto& jd = j["dictionary"];
      FeatureDictionary d;
      d.attach_layer = jd.at("attach_layer").get<int>();
      auto we = jd.at("w_encode").get<std::vector<std::vector<double>>>();
      d.feature_count = we.size();
      d.width = we.empty() ? 0 : we[0].size();
      for (const auto& row : we)
        d.w_encode.insert(d.w_encode.end(), row.begin(), row.end());
      auto wd = jd.at("w_decode").get<std::vector<std::vector<double>>>();
      for (const auto& row : wd)
        d.w_decode.insert(d.w_decode.end(), row.begin(), row.end());
      d.b_encode = jd.at("b_encode").get<std::vector<double>>();
      d.b_decode = jd.at("b_decode").get<std::vector<double>>();
      d.validate();
      dict = std::move(d);
    }
    return {std::move(net), std::move(dict)};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed network: ") + e.what());
  }
}

ordered_json network_to_json(const NeuralNetwork& net,
                             const FeatureDictionary* dict) {
  ordered_json j;
  j["format_version"] = 1;
  j["input_width"] = net.input_width();
  j["layers"] = ordered_json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    ordered_json jl;
    jl["weights"] = ordered_json::array();
    for (std::size_t i = 0; i < layer.out_width; ++i) {
      ordered_json row = ordered_json::array();
      for (std::size_t k = 0; k < layer.in_width; ++k)
        row.push_back(layer.weight(i, k));
      jl["weights"].push_back(std::move(row));
    }
    jl["bias"] = layer.bias;
    jl["activation"] = activation_name(layer.activation);
    j["layers"].push_back(std::move(jl));
  }
  if (dict) {
    ordered_json jd;
    jd["attach_layer"] = dict->attach_layer;
    jd["w_encode"] = ordered_json::array();
    for (std::size_t t = 0; t < dict->feature_count; ++t) {
      ordered_json row = ordered_json::array();
      for (std::size_t k = 0; k < dict->width; ++k)
        row.push_back(dict->w_encode[t * dict->width + k]);
      jd["w_encode"].push_back(std::move(row));
    }
    jd["b_encode"] = dict->b_encode;
    jd["w_decode"] = ordered_json::array();
    for (std::size_t k = 0; k < dict->width; ++k) {
      ordered_json row = ordered_json::array();
      for (std::size_t t = 0; t < dict->feature_count; ++t)
        row.push_back(dict->w_decode[k * dict->feature_count + t]);
      jd["w_decode"].push_back(std::move(row));
    }
    jd["b_decode"] = dict->b_decode;
    j["dictionary"] = std::move(jd);
  }
  return j;
}

std::pair<NeuralNetwork, std::optional<FeatureDictionary>> load_network(
    const std::string& path) {
  return network_from_json(load_json(path));
}

Dataset dataset_from_json(const ordered_json& j) {
  if (!j.is_array()) throw ValidationError("dataset must be a JSON array");
  Dataset d;
  try {
    for (const auto& je : j) {
      Example ex;
      ex.input = je.at("input").get<std::vector<double>>();
      ex.label = je.contains("label") ? je["label"].get<int>() : 0;
      d.examples.push_back(std::move(ex));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed dataset: ") + e.what());
  }
  return d;
}

ordered_json dataset_to_json(const Dataset& dataset) {
  ordered_json j = ordered_json::array();
  for (const Example& ex : dataset.examples) {
    ordered_json je;
    je["input"] = ex.input;
    je["label"] = ex.label;
    j.push_back(std::move(je));
  }
  return j;
}

Dataset load_dataset(const std::string& path) {
  return dataset_from_json(load_json(path));
}

std::vector<double> input_context_from_json(const ordered_json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object() && j.contains("input"))
    return j["input"].get<std::vector<double>>();
  throw ValidationError("context must be an array or {\"input\": [..]}");
}

ordered_json input_context_to_json(const std::vector<double>& input) {
  ordered_json j;
  j["input"] = input;
  return j;
}

ordered_json verdict_to_json(const DependenceVerdict& v) {
  ordered_json j;
  j["holds"] = v.holds;
  j["condition_i"] = v.condition_i;
  j["condition_ii"] = v.condition_ii;
  j["effect_delta"] = v.effect_delta;
  j["epsilon"] = v.epsilon;
  return j;
}

ordered_json overdetermination_to_json(const OverdeterminationReport& r) {
  ordered_json j;
  j["mode"] = r.mode == SearchMode::Exhaustive ? "exhaustive" : "greedy";
  j["epsilon"] = r.epsilon;
  j["k_max"] = r.k_max;
  j["baseline_metric"] = r.baseline_metric;
  j["candidates"] = r.candidates;
  j["singleton_effects"] = ordered_json::object();
  for (const auto& [name, d] : r.singleton_effects)
    j["singleton_effects"][name] = d;
  j["minimal_sets"] = ordered_json::array();
  for (const auto& s : r.minimal_sets) {
    ordered_json js;
    js["nodes"] = s.nodes;
    js["effect_delta"] = s.effect_delta;
    j["minimal_sets"].push_back(std::move(js));
  }
  j["subsets_evaluated"] = r.subsets_evaluated;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

ordered_json preemption_to_json(const PreemptionReport& r) {
  ordered_json j;
  j["epsilon"] = r.epsilon;
  j["rounds"] = ordered_json::array();
  for (const auto& round : r.rounds) {
    ordered_json jr;
    jr["ablated_before"] = round.ablated_before;
    jr["discovered"] = round.discovered;
    jr["singleton_effects"] = ordered_json::object();
    for (const auto& [name, d] : round.singleton_effects)
      jr["singleton_effects"][name] = d;
    j["rounds"].push_back(std::move(jr));
  }
  return j;
}

ordered_json condition_report_to_json(const ConditionReport& r) {
  ordered_json j;
  j["scheme"] = r.scheme == ConditionReport::Scheme::HalpernFive
                    ? "halpern-five"
                    : "sufficient-pair";
  j["conditions"] = r.condition_results;
  j["verdict"] = r.verdict == ConditionReport::Verdict::Transitive
                     ? "transitive"
                     : "not-established";
  if (r.witness) {
    ordered_json w;
    w["a1"] = value_to_json(r.witness->a1);
    w["a2"] = value_to_json(r.witness->a2);
    w["b1"] = value_to_json(r.witness->b1);
    w["b2"] = value_to_json(r.witness->b2);
    w["c1"] = value_to_json(r.witness->c1);
    w["c2"] = value_to_json(r.witness->c2);
    j["witness"] = std::move(w);
  }
  return j;
}

ordered_json effect_table_to_json(const EffectTable& t) {
  ordered_json j;
  j["method"] = t.method;
  j["context"] = t.context;
  j["nodes"] = ordered_json::array();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    ordered_json node;
    node["node"] = t.names[i];
    node["estimate"] = t.effects[i];
    if (!t.variances.empty()) node["variance"] = t.variances[i];
    j["nodes"].push_back(std::move(node));
  }
  if (!t.warnings.empty()) j["warnings"] = t.warnings;
  return j;
}

std::string effect_table_to_csv(const EffectTable& t) {
  std::string out = "node,estimate,variance,method\n";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    out += t.names[i] + "," + format_real(t.effects[i]) + "," +
           (t.variances.empty() ? "" : format_real(t.variances[i])) + "," +
           t.method + "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("short write to '" + path + "'");
}

ordered_json load_json(const std::string& path) {
  try {
    return ordered_json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace causalprobe
