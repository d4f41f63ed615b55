#ifndef PHIOTDR_CONFIG_HPP
#define PHIOTDR_CONFIG_HPP

#include <string>

#include "phiotdr/experiments.hpp"

namespace phiotdr {

// Flat key = value file, '#' comments.  Unknown keys, bad types and
// constraint violations are rejected with the key and line number.
ScenarioConfig parse_config(const std::string& path);

// Applies one key = value assignment (also used for CLI overrides).
// context names the source for diagnostics, e.g. "file.cfg:12".
void apply_config_entry(ScenarioConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& context);

// Fills the default grid for sweep scenarios when none was given and
// validates the final configuration.
void finalize_config(ScenarioConfig& cfg);

// Full resolved configuration in the same key = value schema; re-parsing the
// manifest reproduces the config exactly.
void write_manifest(const ScenarioConfig& cfg, const std::string& path);

std::string manifest_text(const ScenarioConfig& cfg);

}  // namespace phiotdr

#endif
