#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scmra/sim_config.hpp"

namespace scmra {

/// key=value pair from the command line. The value is parsed as JSON when it
/// parses, otherwise taken as a string (so channel=clustered-nlos works).
using Override = std::pair<std::string, std::string>;

Override parse_override(const std::string& text);

/// Every recognised configuration key, in schema order.
const std::vector<std::string>& config_keys();

/// Applies one JSON value to `cfg`. Throws scmra::Error naming the key.
void set_config_value(SimConfig& cfg, const std::string& key, const nlohmann::json& value);

/// Full resolved configuration, keys in schema order.
nlohmann::ordered_json config_to_json(const SimConfig& cfg);

/// Overlays a JSON object onto the defaults; unknown keys are rejected.
SimConfig config_from_json(const nlohmann::json& j);

/// Reads a JSON config file, applies overrides in order and validates.
SimConfig load_config(const std::string& path, const std::vector<Override>& overrides = {});

}  // namespace scmra
