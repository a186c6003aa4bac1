#pragma once

#include <string>

#include "sces/engine.hpp"

namespace sces {

// A complete run description: registry problem name plus engine, schedule
// and Lyapunov settings. JSON keys mirror the field names; unknown or
// missing required keys raise ConfigError naming the offending path.
struct RunConfig {
  std::string problem;
  RunSettings settings;
};

RunConfig parse_config_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

RunConfig read_config(const std::string& path);
void write_config(const RunConfig& config, const std::string& path);

}  // namespace sces
