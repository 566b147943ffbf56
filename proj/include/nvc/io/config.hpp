#pragma once

// YAML configuration. Keys carry their unit as a suffix (`gap_length_m`,
// `sample_rate_Hz`); see configs/paper-defaults.yaml for the full layout.

#include "nvc/sim/config.hpp"

#include <string>
#include <vector>

namespace nvc::io {

struct LoadedConfig {
    sim::ComparatorConfig config;
    std::vector<std::string> warnings; ///< unknown keys, one message each
};

/// Keys that must be present, as dotted paths.
const std::vector<std::string>& mandatory_config_keys();

/// Parse and validate. Missing mandatory keys are reported together in one
/// ConfigError; YAML syntax errors carry line and column. Invariant violations
/// surface as ValidationError.
LoadedConfig parse_config(const std::string& text, const std::string& source = "<string>");
LoadedConfig load_config(const std::string& path);

/// YAML text that parse_config maps back to `cfg`.
std::string dump_config(const sim::ComparatorConfig& cfg);

} // namespace nvc::io
