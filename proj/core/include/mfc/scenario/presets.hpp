#pragma once

#include "mfc/scenario/config.hpp"

namespace mfc::scenario {

// Built-in benchmark scenarios: accel, decel, advanced-cruise, pi-compare,
// theorem1-toy, peaking-grid.
std::vector<std::string> preset_names();

// Returns the named preset. When the MFC_LAB_PRESET_DIR environment
// variable is set and <dir>/<name>.toml exists, that file wins.
ScenarioConfig load_preset(const std::string& name);

}  // namespace mfc::scenario
