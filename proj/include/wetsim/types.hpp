#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace wetsim {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

inline constexpr double pi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Half-width of the scattering ring around each cluster's nominal direction,
/// used when drawing the finite-ray transmit-correlation matrix. A wide ring
/// (rich local scattering) reproduces the reference link budget; narrow rings
/// concentrate the correlation and raise the statistical beamforming gain.
inline constexpr double default_scatter_aperture_deg = 90.0;

enum class CorrelationModel {
  OneRing,  ///< finite scattering ring around the cluster direction
  Iid,      ///< spatially white fading (identity correlation)
};

/// One co-located group of single-antenna energy-harvesting terminals.
struct ClusterConfig {
  int terminals = 1;           ///< K, number of terminals in the cluster
  double angle_deg = 90.0;     ///< nominal direction, measured from endfire
  double aperture_deg = 0.0;   ///< terminal angular half-spread around angle_deg
  double rician_kappa = 0.0;   ///< LOS-to-scatter power ratio (>= 0)
  double pathloss_db = 0.0;    ///< large-scale loss, negative means attenuation
  double scatter_aperture_deg = default_scatter_aperture_deg;
};

/// Transmitter plus cluster layout for one scenario.
struct SystemConfig {
  int antennas = 8;                ///< M, number of ULA elements
  double element_spacing = 0.5;    ///< in wavelengths
  double tx_power_w = 1.0;         ///< total radiated power budget
  double antenna_gain_db = 0.0;    ///< per-element gain
  double rotation_deg = 0.0;       ///< array rotation applied to every cluster
  std::uint64_t seed = 1;          ///< master seed for all random streams
  CorrelationModel correlation = CorrelationModel::OneRing;
  bool freeze_correlation = false; ///< reuse one correlation draw across trials
  std::vector<ClusterConfig> clusters;

  int total_terminals() const {
    int n = 0;
    for (const auto& c : clusters) n += c.terminals;
    return n;
  }

  /// Throws std::invalid_argument with a descriptive message on bad input.
  void validate() const;
};

/// Piecewise-linear harvesting circuit: dead below the sensitivity level,
/// linear in between, clipped at saturation.
struct EhCircuit {
  double sensitivity_w = 6.30e-6;
  double saturation_w = 3.11e-4;
  double efficiency = 0.25;

  void validate() const;
};

}  // namespace wetsim
