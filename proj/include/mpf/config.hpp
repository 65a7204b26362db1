#pragma once

#include "mpf/simulation.hpp"

#include <string>

namespace mpf {

/// Parse a scenario from JSON text (comments allowed). Unknown keys are
/// rejected by name; every section is optional and falls back to the
/// reference scenario defaults. base_dir anchors relative file references.
Scenario parse_scenario_json(const std::string& text, const std::string& base_dir = ".");

/// Load a scenario from a config file; relative file references inside the
/// config resolve against the config's directory.
Scenario load_scenario_file(const std::string& path);

} // namespace mpf
