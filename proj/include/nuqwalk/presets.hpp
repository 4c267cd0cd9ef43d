#pragma once

// Bundled experiment presets, stored as JSON config text (presets are data,
// not code). Names: fig1 ... fig5.

#include <string>
#include <vector>

namespace nuqwalk {

// JSON text for a named preset; throws std::out_of_range for unknown names.
const std::string& preset_json(const std::string& name);

std::vector<std::string> preset_names();

} // namespace nuqwalk
