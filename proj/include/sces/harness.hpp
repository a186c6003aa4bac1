#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sces/config.hpp"
#include "sces/diagnostics.hpp"

namespace sces {

// Named benchmark setups used by the CLI bench subcommand and the
// acceptance suite: "sphere", "constrained-quadratic", "theory-sphere",
// "chain-entropy", "grid-cmdp".
RunConfig preset(const std::string& suite);
std::vector<std::string> preset_names();

// Builds the registry problem and runs the engine.
RunResult run_config(const RunConfig& config, std::uint64_t seed);

// Frequency audit of the estimate-accuracy events on a problem with exact
// references: draws fresh incumbent/trial estimate pairs at sigma0 and
// counts how often both gaps fall within the schedule tolerance. The lower
// bounds are one-sided 99% Hoeffding bounds on the true frequency.
struct AccuracyAudit {
  long long iterations = 0;
  Real f_frequency = 0.0;
  Real f_lower_bound = 0.0;
  bool has_constraints = false;
  Real c_frequency = 0.0;
  Real c_lower_bound = 0.0;
  Real target_p = 0.0;
  bool pass = false;
};
AccuracyAudit check_accuracy(const RunConfig& config, long long iterations, std::uint64_t seed);

int cli_main(int argc, char** argv);

}  // namespace sces
