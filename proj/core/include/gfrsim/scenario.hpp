#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gfrsim/topology.hpp"

namespace gfrsim {

/// Parses an INI scenario (sections [scenario] [buffer] [tcp] [network]
/// [run]). Keys absent from the file keep their ScenarioConfig defaults.
/// Throws ConfigError on syntax errors, unknown sections or keys, and bad
/// values. Does not call validate().
ScenarioConfig parse_scenario(std::istream& in, const ScenarioConfig& base = {});
ScenarioConfig load_scenario_file(const std::string& path);

/// Canonical INI text; parse_scenario(to_ini(c)) reproduces c.
std::string to_ini(const ScenarioConfig& cfg);

/// Sets one "section.key" to a textual value using the file syntax.
ScenarioConfig with_override(const ScenarioConfig& cfg, std::string_view key,
                             std::string_view value);

/// Every accepted "section.key".
const std::vector<std::string>& scenario_keys();

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
ScenarioConfig preset(std::string_view name);

/// Duration text: integer or decimal with unit ns, us, ms or s ("30ms").
SimTime parse_duration(std::string_view text);
/// Shortest exact form using the largest unit that divides the value.
std::string format_duration(SimTime t);

}  // namespace gfrsim
