#include "wetsim/types.hpp"

#include <stdexcept>
#include <string>

namespace wetsim {

namespace {

void fail(const std::string& message) { throw std::invalid_argument(message); }

}  // namespace

void SystemConfig::validate() const {
  if (antennas < 1) fail("antennas must be >= 1");
  if (element_spacing <= 0.0) fail("element_spacing must be positive");
  if (!(tx_power_w > 0.0)) fail("tx_power_w must be positive");
  if (clusters.empty()) fail("at least one cluster is required");
  if (static_cast<int>(clusters.size()) > antennas)
    fail("number of clusters (" + std::to_string(clusters.size()) +
         ") must not exceed antennas (" + std::to_string(antennas) + ")");
  for (std::size_t l = 0; l < clusters.size(); ++l) {
    const auto& c = clusters[l];
    const std::string tag = "cluster " + std::to_string(l) + ": ";
    if (c.terminals < 1) fail(tag + "terminals must be >= 1");
    if (c.rician_kappa < 0.0) fail(tag + "rician_kappa must be >= 0");
    if (c.aperture_deg < 0.0) fail(tag + "aperture_deg must be >= 0");
    if (c.scatter_aperture_deg <= 0.0) fail(tag + "scatter_aperture_deg must be positive");
    if (!std::isfinite(c.pathloss_db)) fail(tag + "pathloss_db must be finite");
  }
}

void EhCircuit::validate() const {
  if (sensitivity_w < 0.0) fail("eh sensitivity must be >= 0");
  if (!(saturation_w > sensitivity_w)) fail("eh saturation must exceed the sensitivity");
  if (efficiency <= 0.0 || efficiency > 1.0) fail("eh efficiency must be in (0, 1]");
}

}  // namespace wetsim
