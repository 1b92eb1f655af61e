#pragma once

#include <span>
#include <utility>

#include "wetsim/types.hpp"

namespace wetsim::analytics {

/// Shape/scale parametrization; mean = shape * scale.
struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;

  double mean() const { return shape * scale; }
  double variance() const { return shape * scale * scale; }
};

/// Density evaluated through log-gamma so large shapes do not overflow.
double gamma_pdf(double x, const GammaParams& g);

/// Regularized lower incomplete gamma, P(shape, x / scale).
double gamma_cdf(double x, const GammaParams& g);

/// Pathloss referred to a unit-power, unit-gain transmitter.
double beta_eq(double beta_linear, double tx_power, double antenna_gain_linear);

/// Moment-matched gamma fit to a sum of independent gamma variables:
/// shape = (sum k_i t_i)^2 / sum k_i t_i^2, scale = sum k_i t_i^2 / sum k_i t_i.
GammaParams second_order_approx(std::span<const GammaParams> parts);

/// Sum-power law under uniform all-antenna excitation with i.i.d. fading:
/// Gamma(K * L, beta_eq).
GammaParams aa_baseline(int terminals, int clusters, double beta_eq);

/// Sum-power law under switched-antenna excitation with i.i.d. fading:
/// Gamma(M * K * L, beta_eq / M).
GammaParams sa_baseline(int antennas, int terminals, int clusters, double beta_eq);

/// Restriction of a Gamma(k, t) sum-power law to `coords` of K coordinates:
/// Gamma((coords / K) * k, t), returned with its second moment.
std::pair<GammaParams, double> projection_power(int coords, int terminals, const GammaParams& g);

/// Received power in dBm as a plain dB budget; pathloss enters negative.
double link_budget_dbm(double tx_dbm, double antenna_gain_db, double precoding_gain_db,
                       double pathloss_db);

/// Precoding gain implied by a measured received power.
double precoding_gain_db(double received_dbm, double tx_dbm, double antenna_gain_db,
                         double pathloss_db);

}  // namespace wetsim::analytics
