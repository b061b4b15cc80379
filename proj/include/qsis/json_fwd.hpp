#pragma once

// nlohmann/json, vendored as a single header.
#include <json.hpp>
