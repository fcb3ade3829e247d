#pragma once

#include "dupsim/simulation.hpp"

#include <string>

namespace dupsim {

// Applies "key = value" lines (# starts a comment) onto the run config.
// Unknown keys or unparsable values raise ConfigError with the line number.
void apply_config_file(const std::string& path, RunConfig& run);

// Single key=value assignment, shared by the file loader.
void apply_config_entry(const std::string& key, const std::string& value, RunConfig& run);

} // namespace dupsim
