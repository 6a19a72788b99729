#include "lll/instance_io.hpp"

#include <fstream>
#include <string>

#include "lll/errors.hpp"

namespace lll {

using nlohmann::json;

double parse_weight(const json& w) {
  if (w.is_number()) return w.get<double>();
  if (!w.is_string()) throw InputError("weight must be a number or a string");
  const auto s = w.get<std::string>();
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    const double num = std::stod(s.substr(0, slash));
    const double den = std::stod(s.substr(slash + 1));
    if (den == 0.0) throw InputError("zero denominator in weight '" + s + "'");
    return num / den;
  } catch (const std::logic_error&) {
    throw InputError("unparsable weight '" + s + "'");
  }
}

json predicate_to_json(const Predicate& p) {
  if (const auto* t = std::get_if<TruthTable>(&p)) {
    return {{"kind", "TruthTable"}, {"params", {{"satisfying", t->satisfying}}}};
  }
  if (const auto* c = std::get_if<CountThreshold>(&p)) {
    json params{{"groups", c->groups}, {"threshold", c->threshold}};
    if (c->reference_var) params["reference_var"] = *c->reference_var;
    else params["reference_value"] = c->reference_value;
    return {{"kind", "CountThreshold"}, {"params", params}};
  }
  const auto& m = std::get<MaxPartLoad>(p);
  return {{"kind", "MaxPartLoad"}, {"params", {{"vars", m.vars}, {"threshold", m.threshold}}}};
}

Predicate predicate_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const json params = j.value("params", json::object());
  if (kind == "TruthTable") {
    return TruthTable{params.value("satisfying", std::vector<std::vector<int>>{})};
  }
  if (kind == "CountThreshold") {
    CountThreshold c;
    if (params.contains("reference_var")) c.reference_var = params["reference_var"].get<VarId>();
    c.reference_value = params.value("reference_value", 0);
    if (params.contains("groups")) c.groups = params["groups"].get<std::vector<std::vector<VarId>>>();
    else c.groups.push_back(params.at("vars").get<std::vector<VarId>>());
    c.threshold = params.at("threshold").get<double>();
    return c;
  }
  if (kind == "MaxPartLoad") {
    return MaxPartLoad{params.at("vars").get<std::vector<VarId>>(), params.at("threshold").get<double>()};
  }
  throw InputError("unknown predicate kind '" + kind + "'");
}

LllInstance instance_from_json(const json& j) {
  try {
    std::vector<VariableSpec> vars;
    for (const auto& jv : j.at("variables")) {
      VariableSpec v;
      v.id = jv.at("id").get<VarId>();
      v.domain_size = jv.value("domain", 2);
      if (jv.contains("weights")) {
        for (const auto& w : jv["weights"]) v.weights.push_back(parse_weight(w));
      }
      vars.push_back(std::move(v));
    }
    std::vector<EventSpec> events;
    for (const auto& je : j.at("events")) {
      EventSpec e;
      e.id = je.at("id").get<EventId>();
      e.vars = je.at("vars").get<std::vector<VarId>>();
      e.predicate = predicate_from_json(je.at("predicate"));
      events.push_back(std::move(e));
    }
    std::optional<Allocation> alloc;
    if (j.contains("allocation") && !j["allocation"].is_null()) {
      Allocation a;
      a.owner.assign(vars.size(), -1);
      const auto& ja = j["allocation"];
      if (ja.is_array()) {
        a.owner = ja.get<std::vector<EventId>>();
      } else {
        for (const auto& [key, value] : ja.items()) {
          const auto v = static_cast<std::size_t>(std::stoul(key));
          if (v >= a.owner.size()) throw InputError("allocation names unknown variable " + key);
          a.owner[v] = value.get<EventId>();
        }
      }
      alloc = std::move(a);
    }
    return build_instance(std::move(vars), std::move(events), std::move(alloc));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed instance JSON: ") + e.what());
  }
}

json instance_to_json(const LllInstance& inst) {
  json vars = json::array();
  for (const auto& v : inst.variables()) {
    vars.push_back({{"id", v.id}, {"domain", v.domain_size}, {"weights", v.weights}});
  }
  json events = json::array();
  for (const auto& e : inst.events()) {
    events.push_back({{"id", e.id}, {"vars", e.vars}, {"predicate", predicate_to_json(e.predicate)}});
  }
  json alloc = json::object();
  for (std::size_t v = 0; v < inst.variable_count(); ++v) alloc[std::to_string(v)] = inst.allocation().owner[v];
  return {{"variables", vars}, {"events", events}, {"allocation", alloc}};
}

LllInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("instance file '" + path + "' is not valid JSON: " + e.what());
  }
  return instance_from_json(j);
}

json assignment_to_json(std::span<const int> assignment) {
  json out = json::object();
  for (std::size_t v = 0; v < assignment.size(); ++v) out[std::to_string(v)] = assignment[v];
  return out;
}

Assignment assignment_from_json(const json& j, std::size_t variable_count) {
  Assignment out(variable_count, -1);
  if (j.is_array()) {
    auto values = j.get<std::vector<int>>();
    if (values.size() != variable_count) throw InputError("assignment array has the wrong length");
    return values;
  }
  for (const auto& [key, value] : j.items()) {
    const auto v = static_cast<std::size_t>(std::stoul(key));
    if (v >= variable_count) throw InputError("assignment names unknown variable " + key);
    out[v] = value.get<int>();
  }
  return out;
}

}  // namespace lll
