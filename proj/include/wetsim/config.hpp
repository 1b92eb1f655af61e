#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "wetsim/simulation.hpp"
#include "wetsim/types.hpp"

namespace wetsim::config {

/// Parse or validation failure, carrying "file:line: message" in what().
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& file, int line, const std::string& message)
      : std::runtime_error(line > 0 ? file + ":" + std::to_string(line) + ": " + message
                                    : file + ": " + message) {}
};

/// Everything a scenario file can define. CLI flags override individual
/// fields after parsing.
struct Scenario {
  SystemConfig system;
  EhCircuit circuit;
  constrained::SolverOptions solver;
  std::int64_t default_trials = 10000;
};

/// Key-value scenario format: global keys first, then one [cluster] section
/// per cluster. Unknown keys and malformed values raise ConfigError with the
/// offending line number.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& name = "<inline>");

/// Round-trippable snapshot of a fully resolved scenario in file syntax.
std::string scenario_to_text(const Scenario& scenario);

}  // namespace wetsim::config
