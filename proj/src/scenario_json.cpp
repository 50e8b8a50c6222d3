#include "linkage/scenario_json.hpp"

#include <fstream>

namespace linkage {

namespace {

using nlohmann::json;

std::string kind_name(LinkageKind k) {
  switch (k) {
    case LinkageKind::Quality: return "quality";
    case LinkageKind::Circumstance: return "circumstance";
    case LinkageKind::NoLinkage: return "no_linkage";
  }
  return "quality";
}

LinkageKind kind_from_name(const std::string& name) {
  if (name == "quality") return LinkageKind::Quality;
  if (name == "circumstance") return LinkageKind::Circumstance;
  if (name == "no_linkage") return LinkageKind::NoLinkage;
  throw StructuralError("unknown linkage kind: " + name);
}

std::string family_name(DistFamily f) {
  switch (f) {
    case DistFamily::Gaussian: return "gaussian";
    case DistFamily::Logistic: return "logistic";
    case DistFamily::StudentT: return "student_t";
  }
  return "gaussian";
}

DistFamily family_from_name(const std::string& name) {
  if (name == "gaussian") return DistFamily::Gaussian;
  if (name == "logistic") return DistFamily::Logistic;
  if (name == "student_t") return DistFamily::StudentT;
  throw StructuralError("unknown distribution family: " + name);
}

json component_to_json(const ComponentDist& d) {
  json j = {{"family", family_name(d.family)},
            {"location", d.location},
            {"scale", d.scale}};
  if (d.family == DistFamily::StudentT) j["dof"] = d.dof;
  return j;
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw StructuralError(std::string("missing or non-numeric field: ") + key);
  }
  return j.at(key).get<double>();
}

ComponentDist component_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) {
    throw StructuralError("component must be an object with a family");
  }
  ComponentDist d;
  d.family = family_from_name(j.at("family").get<std::string>());
  d.location = require_number(j, "location");
  d.scale = require_number(j, "scale");
  if (d.family == DistFamily::StudentT) d.dof = require_number(j, "dof");
  check_component(d);
  return d;
}

}  // namespace

nlohmann::json scenario_to_json(const Scenario& s) {
  json j;
  j["kind"] = kind_name(s.kind);
  if (s.gaussian) {
    j["gaussian"] = {{"mu", s.gaussian->mu},
                     {"var_common_type", s.gaussian->var_common_type},
                     {"var_idio_type", s.gaussian->var_idio_type},
                     {"var_common_shock", s.gaussian->var_common_shock},
                     {"var_idio_shock", s.gaussian->var_idio_shock}};
  }
  if (s.general) {
    j["general"] = {{"common_type", component_to_json(s.general->common_type)},
                    {"idio_type", component_to_json(s.general->idio_type)},
                    {"common_shock", component_to_json(s.general->common_shock)},
                    {"idio_shock", component_to_json(s.general->idio_shock)}};
  }
  json cost = {{"family", s.cost.family == CostFamily::Quadratic ? "quadratic"
                                                                 : "power"},
               {"kappa", s.cost.kappa}};
  if (s.cost.family == CostFamily::Power) cost["gamma"] = s.cost.gamma;
  j["cost"] = cost;
  j["reward"] = s.reward;
  j["population"] = s.population;
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw StructuralError("scenario must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw StructuralError("scenario requires a string field: kind");
  }
  Scenario s;
  s.kind = kind_from_name(j.at("kind").get<std::string>());

  if (j.contains("gaussian")) {
    const json& g = j.at("gaussian");
    GaussianParams p;
    p.mu = require_number(g, "mu");
    p.var_common_type = require_number(g, "var_common_type");
    p.var_idio_type = require_number(g, "var_idio_type");
    p.var_common_shock = require_number(g, "var_common_shock");
    p.var_idio_shock = require_number(g, "var_idio_shock");
    s.gaussian = p;
  }
  if (j.contains("general")) {
    const json& g = j.at("general");
    GeneralParams p;
    for (const char* key : {"common_type", "idio_type", "common_shock",
                            "idio_shock"}) {
      if (!g.contains(key)) {
        throw StructuralError(std::string("general requires component: ") + key);
      }
    }
    p.common_type = component_from_json(g.at("common_type"));
    p.idio_type = component_from_json(g.at("idio_type"));
    p.common_shock = component_from_json(g.at("common_shock"));
    p.idio_shock = component_from_json(g.at("idio_shock"));
    s.general = p;
  }

  if (!j.contains("cost") || !j.at("cost").is_object()) {
    throw StructuralError("scenario requires an object field: cost");
  }
  const json& c = j.at("cost");
  const std::string fam = c.contains("family")
                              ? c.at("family").get<std::string>()
                              : std::string("quadratic");
  if (fam == "quadratic") {
    s.cost = CostFunction::quadratic(require_number(c, "kappa"));
  } else if (fam == "power") {
    s.cost = CostFunction::power(require_number(c, "kappa"),
                                 require_number(c, "gamma"));
  } else {
    throw StructuralError("unknown cost family: " + fam);
  }

  s.reward = require_number(j, "reward");
  if (!j.contains("population") || !j.at("population").is_number_integer()) {
    throw StructuralError("scenario requires an integer field: population");
  }
  s.population = j.at("population").get<std::int64_t>();

  require_structure(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError("scenario JSON parse error: " + std::string(e.what()));
  }
  return scenario_from_json(j);
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write scenario file: " + path);
  out << scenario_to_json(s).dump(2) << "\n";
}

}  // namespace linkage
