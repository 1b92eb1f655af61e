#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wetsim/config.hpp"
#include "wetsim/simulation.hpp"

namespace wetsim::report {

inline constexpr const char* tool_version = "wetsim 0.1.0";

/// Doubles are printed with 17 significant digits so files round-trip
/// losslessly; fields are comma separated with a header row.
std::string samples_csv(std::span<const sim::TrialRecord> records, int clusters);

std::string summary_json(const sim::StatsSummary& summary, sim::Scheme scheme,
                         std::int64_t trials);

std::string sweep_csv(std::span<const std::pair<sim::Scheme, std::vector<sim::SweepPoint>>> results,
                      sim::SweepParameter parameter, std::int64_t trials);

/// Everything needed to reproduce a run byte for byte: resolved scenario
/// text, command, seed, trial count and output list.
std::string manifest_json(const config::Scenario& scenario, const std::string& command,
                          const std::vector<std::string>& schemes, std::int64_t trials,
                          std::uint64_t seed, std::span<const std::string> outputs,
                          double duration_s);

void write_file(const std::string& path, const std::string& content);

}  // namespace wetsim::report
