#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsis/json_fwd.hpp"

namespace qsis {

// Subcommands in dispatch order.
const std::vector<std::string>& command_names();
// Named experiment presets: {"preset-name": {"command": ..., key: value, ...}}.
const nlohmann::json& presets();

// Defaults, then preset values, then explicit keys. Unknown keys, wrong
// types and out-of-range values are usage or range errors.
nlohmann::json resolve_config(const std::string& command, const nlohmann::json& config);

// FNV-1a 64-bit hash of the resolved config's canonical dump, 16 hex digits.
std::string config_hash(const nlohmann::json& resolved);

struct RunResult {
  nlohmann::json report;            // also written as {command}-{hash}.json
  int exit_code = 0;                // 0 pass, 1 verdict fail
  std::vector<std::string> files;   // paths written
};

// Runs one command. Writes nothing when out_dir is empty. Throws Error on
// invalid configs and numeric failures.
RunResult run_command(const std::string& command, const nlohmann::json& config, const std::string& out_dir);

// 2 for usage, range, domain and io errors; 3 for numeric failures.
int exit_code_for(int error_kind);

}  // namespace qsis
