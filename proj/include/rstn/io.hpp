#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rstn/families.hpp"
#include "rstn/scenario.hpp"

namespace rstn {

// A parsed scenario file: either an explicit scenario or a named family with parameters.
struct ScenarioDocument {
  Scenario scenario;
  std::optional<FamilyParams> family;
  std::string text;  // raw file contents, hashed into reports
};

Mode parse_mode(const std::string& name);

// Malformed JSON, wrong types and unknown keys raise ErrorKind::parse; invariant violations raise validation.
ScenarioDocument parse_scenario(const std::string& text);
ScenarioDocument load_scenario(const std::string& path);

nlohmann::json scenario_to_json(const Scenario& s);
nlohmann::json family_to_json(const FamilyParams& f);
std::string dump_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

std::string read_file(const std::string& path);

}  // namespace rstn
