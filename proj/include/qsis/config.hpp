#pragma once

#include <string>

#include "qsis/json_fwd.hpp"

namespace qsis {

// Parses `key = value` pairs separated by commas or newlines into a JSON
// object. Values are quoted strings, numbers, true/false, bare words or
// bracketed lists. `#` starts a comment. Text that starts with '{' is read as
// JSON instead. Duplicate keys are a usage error.
nlohmann::json parse_config_text(const std::string& text);

}  // namespace qsis
