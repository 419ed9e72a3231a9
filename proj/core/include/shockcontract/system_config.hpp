#pragma once

#include "shockcontract/system.hpp"

#include <string>

namespace shockcontract {

/// Parses {"system": "example3x3", "params": {"alpha": 1.0}}.
/// Throws BadParameter on malformed text or non-numeric parameters.
[[nodiscard]] SystemSpec parse_system_config(const std::string& text);

/// Reads and parses a config file.
[[nodiscard]] SystemSpec load_system_config(const std::string& path);

/// Inverse of parse_system_config; keys are emitted in sorted order.
[[nodiscard]] std::string to_config_text(const SystemSpec& spec);

/// Comma separated list of doubles, e.g. "1,0.5,-2".
[[nodiscard]] Vector parse_state(const std::string& text);

}  // namespace shockcontract
