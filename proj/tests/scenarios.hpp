#pragma once

#include "wetsim/types.hpp"

namespace wetsim::testing {

/// Benchmark operating point used across the suite: three eight-terminal
/// clusters at 0/30/70 degrees, eight antennas, Rician factor 5, 10 W budget,
/// 10 dB element gain, -63.5 dB pathloss.
inline SystemConfig reference_scenario() {
  SystemConfig config;
  config.antennas = 8;
  config.tx_power_w = 10.0;
  config.antenna_gain_db = 10.0;
  config.seed = 1;
  config.clusters.assign(3, ClusterConfig{});
  const double angles[] = {0.0, 30.0, 70.0};
  for (int l = 0; l < 3; ++l) {
    config.clusters[l].terminals = 8;
    config.clusters[l].angle_deg = angles[l];
    config.clusters[l].rician_kappa = 5.0;
    config.clusters[l].pathloss_db = -63.5;
  }
  return config;
}

/// Uncorrelated Rayleigh reference: unit pathloss and budget, so the sum
/// power laws have unit scale.
inline SystemConfig iid_rayleigh_scenario(int antennas = 8, int terminals = 8) {
  SystemConfig config;
  config.antennas = antennas;
  config.tx_power_w = 1.0;
  config.antenna_gain_db = 0.0;
  config.seed = 1;
  config.correlation = CorrelationModel::Iid;
  config.clusters.assign(1, ClusterConfig{});
  config.clusters[0].terminals = terminals;
  config.clusters[0].rician_kappa = 0.0;
  config.clusters[0].pathloss_db = 0.0;
  return config;
}

}  // namespace wetsim::testing
