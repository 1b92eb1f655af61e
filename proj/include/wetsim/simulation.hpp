#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wetsim/constrained.hpp"
#include "wetsim/types.hpp"

namespace wetsim::sim {

enum class Scheme {
  Aa,
  Sa,
  Mp,
  StatSingle,
  StatMulti,
  FullCsit,
  ConstrainedStat,
  ConstrainedFull,
};

/// Lower-case token used on the command line and in output files.
std::string to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(const std::string& token);
std::span<const Scheme> all_schemes();

/// Harvested power for a given incident RF power.
double harvest(double p_in_w, const EhCircuit& circuit);

struct TrialRecord {
  std::int64_t trial = 0;
  Scheme scheme = Scheme::Aa;
  double sum_power_rf = 0.0;
  double sum_power_harvested = 0.0;
  std::vector<double> per_cluster_rf;
  std::vector<double> per_terminal_rf;
  bool feasible = true;
};

struct Histogram {
  std::vector<double> edges;        ///< size bins + 1
  std::vector<std::int64_t> counts; ///< size bins
};

struct StatsSummary {
  double mean = 0.0;
  double variance = 0.0;      ///< unbiased
  std::int64_t count = 0;     ///< feasible trials only
  std::int64_t infeasible = 0;
  Histogram histogram;        ///< Freedman-Diaconis binning of sum power
  std::vector<double> cluster_mean;
  std::vector<double> cluster_variance;
  double harvested_mean = 0.0;
};

struct RunOptions {
  int parallelism = 1;
  constrained::SolverOptions solver;
};

/// Ergodic Monte Carlo: per trial the correlation statistics are redrawn,
/// the scheme's beam recomputed, and powers measured on a fresh realization.
/// Records arrive in trial order and are byte-identical for a given
/// (config, circuit, scheme, trials) at any parallelism degree.
std::vector<TrialRecord> run_trials(const SystemConfig& config, const EhCircuit& circuit,
                                    Scheme scheme, std::int64_t trials,
                                    const RunOptions& options = {});

/// Moments, histogram and per-cluster breakdown over the feasible records.
StatsSummary summarize(std::span<const TrialRecord> records);

enum class SweepParameter { Kappa, Antennas, Angle, Rotation, Clusters };

std::optional<SweepParameter> sweep_parameter_from_string(const std::string& token);
std::string to_string(SweepParameter parameter);

struct SweepPoint {
  double value = 0.0;
  std::optional<StatsSummary> summary;  ///< empty on per-value error
  std::string error;
};

/// Applies one parameter value per point and repeats the whole Monte Carlo.
/// Invalid values yield an error entry instead of aborting the sweep.
std::vector<SweepPoint> sweep(const SystemConfig& config, const EhCircuit& circuit, Scheme scheme,
                              SweepParameter parameter, std::span<const double> values,
                              std::int64_t trials, const RunOptions& options = {});

/// Same seed and therefore identical channel draws for every scheme.
std::vector<std::pair<Scheme, StatsSummary>> compare_schemes(const SystemConfig& config,
                                                             const EhCircuit& circuit,
                                                             std::span<const Scheme> schemes,
                                                             std::int64_t trials,
                                                             const RunOptions& options = {});

}  // namespace wetsim::sim
