#include "wetsim/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wetsim::analytics {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

/// Regularized lower incomplete gamma P(a, x) by series (x < a + 1) or by the
/// Lentz continued fraction for the complement.
double regularized_gamma_p(double a, double x) {
  require(a > 0.0, "gamma shape must be positive");
  if (x <= 0.0) return 0.0;
  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);

  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return std::exp(log_prefactor) * sum;
  }

  // Q(a, x) via modified Lentz on the standard continued fraction.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double q = std::exp(log_prefactor) * h;
  return 1.0 - q;
}

}  // namespace

double gamma_pdf(double x, const GammaParams& g) {
  require(g.shape > 0.0 && g.scale > 0.0, "gamma parameters must be positive");
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (g.shape < 1.0) return std::numeric_limits<double>::infinity();
    if (g.shape == 1.0) return 1.0 / g.scale;
    return 0.0;
  }
  const double log_pdf = (g.shape - 1.0) * std::log(x) - x / g.scale -
                         g.shape * std::log(g.scale) - std::lgamma(g.shape);
  return std::exp(log_pdf);
}

double gamma_cdf(double x, const GammaParams& g) {
  require(g.shape > 0.0 && g.scale > 0.0, "gamma parameters must be positive");
  return regularized_gamma_p(g.shape, x / g.scale);
}

double beta_eq(double beta_linear, double tx_power, double antenna_gain_linear) {
  require(beta_linear > 0.0, "pathloss must be positive in linear scale");
  require(tx_power > 0.0, "tx power must be positive");
  require(antenna_gain_linear > 0.0, "antenna gain must be positive in linear scale");
  return beta_linear / (tx_power * antenna_gain_linear);
}

GammaParams second_order_approx(std::span<const GammaParams> parts) {
  require(!parts.empty(), "at least one gamma component is required");
  double first = 0.0;   // sum k_i t_i
  double second = 0.0;  // sum k_i t_i^2
  for (const auto& p : parts) {
    require(p.shape > 0.0 && p.scale > 0.0, "gamma parameters must be positive");
    first += p.shape * p.scale;
    second += p.shape * p.scale * p.scale;
  }
  return {first * first / second, second / first};
}

GammaParams aa_baseline(int terminals, int clusters, double beta_eq) {
  require(terminals > 0 && clusters > 0, "counts must be positive");
  require(beta_eq > 0.0, "equivalent pathloss must be positive");
  return {static_cast<double>(terminals) * clusters, beta_eq};
}

GammaParams sa_baseline(int antennas, int terminals, int clusters, double beta_eq) {
  require(antennas > 0 && terminals > 0 && clusters > 0, "counts must be positive");
  require(beta_eq > 0.0, "equivalent pathloss must be positive");
  return {static_cast<double>(antennas) * terminals * clusters, beta_eq / antennas};
}

std::pair<GammaParams, double> projection_power(int coords, int terminals, const GammaParams& g) {
  require(terminals > 0, "terminal count must be positive");
  require(coords > 0 && coords <= terminals, "coordinate count must be in [1, terminals]");
  const double fraction = static_cast<double>(coords) / terminals;
  GammaParams proj{fraction * g.shape, g.scale};
  const double second_moment = proj.variance() + proj.mean() * proj.mean();
  return {proj, second_moment};
}

double link_budget_dbm(double tx_dbm, double antenna_gain_db, double precoding_gain_db,
                       double pathloss_db) {
  return tx_dbm + antenna_gain_db + precoding_gain_db + pathloss_db;
}

double precoding_gain_db(double received_dbm, double tx_dbm, double antenna_gain_db,
                         double pathloss_db) {
  return received_dbm - tx_dbm - antenna_gain_db - pathloss_db;
}

}  // namespace wetsim::analytics
