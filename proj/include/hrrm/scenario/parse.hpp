#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hrrm/scenario/config.hpp"

namespace hrrm::scenario {

/// Reads a scenario file (JSON; // and /* */ comments allowed), fills
/// defaults and validates. Throws ParseError with "file:line:column" for
/// malformed text and ValidationError for schema or range problems.
ScenarioConfig parse_scenario(const std::filesystem::path& path);

/// As parse_scenario, for text already in memory. `source` names it in errors.
ScenarioConfig parse_scenario_text(std::string_view text, const std::string& source = "<text>");

/// Every field written out explicitly; parsing the result yields an equal config.
std::string serialize_scenario(const ScenarioConfig& config);

}  // namespace hrrm::scenario
