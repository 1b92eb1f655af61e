#pragma once

#include <random>
#include <utility>
#include <vector>

#include "wetsim/types.hpp"

namespace wetsim::channel {

/// Slow-timescale description of one cluster: deterministic LOS rows plus the
/// Karhunen-Loeve factorization of the transmit correlation matrix, with the
/// large-scale weights already folded in.
struct ClusterStatistics {
  cmat h_los;      ///< K x M, one steering row per terminal
  cmat kl_basis;   ///< U, M x r with orthonormal columns
  rvec kl_gains;   ///< Lambda, r positive entries in nonincreasing order
  double alpha1 = 0.0;  ///< LOS weight, sqrt(beta * kappa / (1 + kappa))
  double alpha2 = 0.0;  ///< scatter weight, sqrt(beta / (1 + kappa))

  Eigen::Index rank() const { return kl_gains.size(); }
  Eigen::Index terminals() const { return h_los.rows(); }
  Eigen::Index antennas() const { return h_los.cols(); }

  /// diag(sqrt(Lambda)) * U^H, the r x M factor that colors white fading.
  cmat mp_factor() const;

  /// U * diag(Lambda) * U^H, reassembled on demand.
  cmat correlation() const;
};

/// One fast-fading draw on top of fixed statistics.
struct ChannelRealization {
  cmat fading;  ///< G, K x r, i.i.d. unit-variance complex Gaussian
  cmat h_eff;   ///< alpha1 * H_los + alpha2 * G * mp_factor, K x M
};

/// Splits a pathloss between the deterministic and scattered propagation
/// paths. Returns (alpha1, alpha2) with alpha1^2 + alpha2^2 = beta_linear.
std::pair<double, double> rician_weights(double beta_linear, double kappa);

/// Half-wavelength-normalized ULA response for a planar wave from `phi_deg`
/// (measured from endfire). Entry i is exp(j * 2*pi * i * spacing * cos(phi)).
cvec steering_vector(double phi_deg, int antennas, double spacing = 0.5);

/// K steering rows for one cluster. With zero aperture all rows coincide;
/// otherwise each terminal direction is drawn uniformly inside the aperture.
cmat los_matrix(const ClusterConfig& cluster, int antennas, double spacing,
                double rotation_deg, std::mt19937_64& rng);

/// M x N_s matrix F whose columns are scaled ray responses drawn uniformly
/// from the cluster's scattering ring; F * F^H is the correlation matrix.
cmat scatter_rays(const ClusterConfig& cluster, int antennas, double spacing, int num_rays,
                  double rotation_deg, std::mt19937_64& rng);

/// Finite-ray transmit correlation matrix, Hermitian PSD with trace M and
/// rank min(rank_target, M). Throws if rank_target is out of range.
cmat sample_correlation(const ClusterConfig& cluster, int antennas, double spacing,
                        int rank_target, double rotation_deg, std::mt19937_64& rng);

/// Eigen-factorizes a Hermitian PSD correlation matrix and truncates the
/// numerically zero tail. Returns (U, Lambda) with Lambda nonincreasing.
/// Throws if the input is not Hermitian to within 1e-8.
std::pair<cmat, rvec> kl_factors(const cmat& correlation);

/// Same factorization computed from the thin ray factor F (M x N_s) without
/// forming the M x M correlation matrix.
std::pair<cmat, rvec> kl_factors_from_rays(const cmat& rays);

/// K x r matrix of i.i.d. CN(0, 1) entries.
cmat sample_fading(int terminals, int rank, std::mt19937_64& rng);

/// Draws per-trial statistics for one cluster under the configured
/// correlation model. The element gain is folded into the pathloss.
ClusterStatistics make_cluster_statistics(const ClusterConfig& cluster, const SystemConfig& system,
                                          std::mt19937_64& rng);

/// Applies a fresh fading draw to fixed statistics.
ChannelRealization realize_channel(const ClusterStatistics& stats, std::mt19937_64& rng);

}  // namespace wetsim::channel
