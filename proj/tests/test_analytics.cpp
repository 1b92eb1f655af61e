#include <cmath>
#include <vector>

#include <doctest.h>

#include "wetsim/analytics.hpp"
#include "wetsim/types.hpp"

using namespace wetsim;
using namespace wetsim::analytics;

namespace {

/// Composite Simpson quadrature of the density over [0, hi].
double integrate_pdf(const GammaParams& g, double hi, int panels) {
  const double h = hi / panels;
  double acc = gamma_pdf(0.0, g) + gamma_pdf(hi, g);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * gamma_pdf(i * h, g);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("gamma density closed-form values") {
  CHECK(gamma_pdf(0.0, {1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(gamma_pdf(1.0, {1.0, 1.0}) == doctest::Approx(std::exp(-1.0)));
  CHECK(gamma_pdf(0.0, {2.0, 1.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(gamma_pdf(1.0, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(gamma_pdf(1.0, {1.0, -1.0}), std::invalid_argument);
  CHECK(gamma_pdf(-0.5, {1.0, 1.0}) == 0.0);
}

TEST_CASE("gamma density integrates to one") {
  for (const GammaParams g : {GammaParams{1.0, 1.0}, GammaParams{8.0, 1.0},
                              GammaParams{64.0, 0.125}, GammaParams{24.0, 4.4e-9}}) {
    const double mass = integrate_pdf(g, 50.0 * g.shape * g.scale, 20000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("gamma cdf agrees with quadrature and is monotone") {
  const GammaParams g{8.0, 1.0};
  for (double x : {1.0, 4.0, 8.0, 15.0}) {
    const double by_quadrature = integrate_pdf(g, x, 20000);
    CHECK(gamma_cdf(x, g) == doctest::Approx(by_quadrature).epsilon(1e-8));
  }
  CHECK(gamma_cdf(0.0, g) == doctest::Approx(0.0));
  CHECK(gamma_cdf(1e4, g) == doctest::Approx(1.0));
  double prev = 0.0;
  for (double x = 0.5; x < 30.0; x += 0.5) {
    const double c = gamma_cdf(x, g);
    CHECK(c >= prev);
    prev = c;
  }

  // Large-shape regime exercised by the switched-antenna law.
  const GammaParams big{4096.0, 1.0 / 64.0};
  CHECK(gamma_cdf(big.mean(), big) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("equivalent power gain normalization") {
  CHECK(beta_eq(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(beta_eq(std::pow(10.0, -6.35), 10.0, 10.0) ==
        doctest::Approx(std::pow(10.0, -8.35)).epsilon(1e-12));
  const double base = beta_eq(0.37, 2.0, 5.0);
  CHECK(beta_eq(0.37, 4.0, 5.0) == doctest::Approx(base / 2.0).epsilon(1e-12));
}

TEST_CASE("second-order gamma fit") {
  SUBCASE("identical terms collapse to a scaled shape") {
    std::vector<GammaParams> parts(3, GammaParams{8.0, 4.4e-9});
    const auto fit = second_order_approx(parts);
    CHECK(fit.shape == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(fit.scale == doctest::Approx(4.4e-9).epsilon(1e-12));
  }
  SUBCASE("single term is unchanged") {
    const std::vector<GammaParams> parts{{3.3, 0.7}};
    const auto fit = second_order_approx(parts);
    CHECK(fit.shape == doctest::Approx(3.3));
    CHECK(fit.scale == doctest::Approx(0.7));
  }
  SUBCASE("two-term closed form") {
    const std::vector<GammaParams> parts{{1.0, 1.0}, {1.0, 2.0}};
    const auto fit = second_order_approx(parts);
    CHECK(fit.shape == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(fit.scale == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("mean and variance preserved for arbitrary mixtures") {
    const std::vector<GammaParams> parts{{0.5, 2.0}, {7.0, 0.1}, {2.5, 1.3}};
    double mean = 0.0, var = 0.0;
    for (const auto& p : parts) {
      mean += p.mean();
      var += p.variance();
    }
    const auto fit = second_order_approx(parts);
    CHECK(fit.mean() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(fit.variance() == doctest::Approx(var).epsilon(1e-12));
  }
}

TEST_CASE("baseline sum-power laws") {
  const double scale = std::pow(10.0, -8.35);
  const auto aa = aa_baseline(8, 3, scale);
  CHECK(aa.shape == doctest::Approx(24.0));
  CHECK(aa.scale == doctest::Approx(scale));

  const auto sa = sa_baseline(8, 8, 3, scale);
  CHECK(sa.shape == doctest::Approx(192.0));
  CHECK(sa.scale == doctest::Approx(scale / 8.0));

  CHECK(sa.mean() == doctest::Approx(aa.mean()).epsilon(1e-12));
  CHECK(aa.variance() / sa.variance() == doctest::Approx(8.0).epsilon(1e-12));

  const auto single = aa_baseline(1, 1, 0.5);
  CHECK(single.shape == doctest::Approx(1.0));
}

TEST_CASE("projection to a coordinate subset") {
  const GammaParams base{24.0, 0.5};
  {
    const auto [g, m2] = projection_power(8, 8, base);
    CHECK(g.shape == doctest::Approx(base.shape));
    CHECK(g.scale == doctest::Approx(base.scale));
    CHECK(m2 == doctest::Approx(base.variance() + base.mean() * base.mean()).epsilon(1e-12));
  }
  {
    const auto [g, m2] = projection_power(4, 8, base);
    CHECK(g.mean() == doctest::Approx(base.mean() / 2.0).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(g.variance() + g.mean() * g.mean()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(projection_power(9, 8, base), std::invalid_argument);
  CHECK_THROWS_AS(projection_power(0, 8, base), std::invalid_argument);
}

TEST_CASE("link budget arithmetic") {
  const double pr = link_budget_dbm(40.0, 10.0, 19.57, -63.5);
  CHECK(pr == doctest::Approx(6.07).epsilon(1e-12));
  CHECK(dbm_to_watts(pr) == doctest::Approx(4.046e-3).epsilon(1e-3));
  CHECK(link_budget_dbm(40.0, 0.0, 0.0, 0.0) == doctest::Approx(40.0));
  CHECK(precoding_gain_db(6.07, 40.0, 10.0, -63.5) == doctest::Approx(19.57).epsilon(1e-12));
}

TEST_CASE("unit conversions round-trip") {
  for (double w : {1e-9, 6.30e-6, 3.11e-4, 1.0, 10.0}) {
    CHECK(dbm_to_watts(watts_to_dbm(w)) == doctest::Approx(w).epsilon(1e-12));
  }
  CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(linear_to_db(db_to_linear(-63.5)) == doctest::Approx(-63.5).epsilon(1e-12));
  CHECK(dbm_to_watts(-4.8) == doctest::Approx(3.311e-4).epsilon(1e-3));
}
