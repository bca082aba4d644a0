#pragma once

#include <istream>
#include <string>
#include <vector>

#include "icsim/params.hpp"

namespace icsim {

struct Config {
  ExperimentParams experiment;
  DetectionParams detection;
};

/// Parse `key = value` lines grouped under [experiment] and [detection];
/// `#` starts a comment.  Unknown sections or keys are ConfigErrors.
Config parse_config(std::istream& in);

Config load_config(const std::string& path);

/// Set one field by its config key (keys are unique across sections).
/// Throws ConfigError for unknown keys or unparsable values.
void apply_override(Config& config, const std::string& key, const std::string& value);

/// All recognized config keys, section-qualified order.
std::vector<std::string> config_keys();

}  // namespace icsim
