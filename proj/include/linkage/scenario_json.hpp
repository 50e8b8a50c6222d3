#pragma once

#include <string>

#include <json.hpp>

#include "linkage/scenario.hpp"

namespace linkage {

nlohmann::json scenario_to_json(const Scenario& s);

/// Parses and structurally validates a scenario. Throws StructuralError on
/// malformed documents (unknown kinds, missing fields, bad values).
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace linkage
