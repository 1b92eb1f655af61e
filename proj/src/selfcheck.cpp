#include "wetsim/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "wetsim/analytics.hpp"
#include "wetsim/constrained.hpp"
#include "wetsim/precoding.hpp"
#include "wetsim/rng.hpp"
#include "wetsim/simulation.hpp"

namespace wetsim::selfcheck {

namespace {

struct Battery {
  std::ostream& out;
  double widen = 1.0;  ///< sqrt(1e4 / trials); statistical tolerances sized at 1e4
  bool corrupt = false;
  bool all_pass = true;

  /// Statistical limits go through here so the corruption hook can zero them.
  double stat_limit(double base) const { return corrupt ? 0.0 : base; }

  void check(const std::string& name, bool pass, double measured, double limit) {
    all_pass = all_pass && pass;
    out << (pass ? "[PASS] " : "[FAIL] ") << name << " (|err| " << std::scientific
        << std::setprecision(3) << measured << " vs limit " << limit << ")\n";
  }
};

double ks_distance(std::vector<double> samples, const analytics::GammaParams& law) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = analytics::gamma_cdf(samples[i], law);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(static_cast<double>(i) / n - f));
  }
  return d;
}

void check_real_embedding(Battery& b, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    cmat a(6, 4);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = complex_gaussian(rng);
    const cvec x = random_sphere_point(4, 2.5, rng);
    const rmat q = constrained::real_equivalent(a.adjoint() * a);
    const rvec z = constrained::real_embed(x);
    const double direct = (a * x).squaredNorm();
    const double embedded = z.dot(q * z);
    worst = std::max(worst, std::abs(direct - embedded) / direct);
    worst = std::max(worst, (constrained::complex_from_real(z) - x).norm());
  }
  b.check("real-equivalent quadratic form identity", worst <= 1e-10, worst, 1e-10);
}

void check_magnitude_law(Battery& b, std::int64_t trials, std::mt19937_64& rng) {
  std::vector<double> samples(static_cast<std::size_t>(trials));
  for (auto& s : samples) s = std::norm(complex_gaussian(rng));
  const double d = ks_distance(std::move(samples), {1.0, 1.0});
  const double limit = b.stat_limit(0.02 * b.widen);
  b.check("|CN(0,1)|^2 follows Exp(1), KS distance", d <= limit, d, limit);
}

void check_exponential_sum(Battery& b, std::int64_t trials, std::mt19937_64& rng) {
  constexpr int n = 24;
  std::vector<double> sums(static_cast<std::size_t>(trials));
  for (auto& s : sums) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::norm(complex_gaussian(rng));
    s = acc;
  }
  double mean = 0.0;
  for (double s : sums) mean += s;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double s : sums) var += (s - mean) * (s - mean);
  var /= static_cast<double>(trials - 1);

  // CLT three-sigma bands around the Gamma(n, 1) moments.
  const double sd_mean = std::sqrt(static_cast<double>(n) / static_cast<double>(trials));
  const double kurt = 3.0 + 6.0 / n;  // gamma excess kurtosis 6/shape
  const double sd_var =
      static_cast<double>(n) * std::sqrt((kurt - 1.0) / static_cast<double>(trials));
  const double mean_limit = b.stat_limit(3.0 * sd_mean);
  const double var_limit = b.stat_limit(3.0 * sd_var);
  b.check("sum of 24 Exp(1) terms, mean vs Gamma(24,1)", std::abs(mean - n) <= mean_limit,
          std::abs(mean - n), mean_limit);
  b.check("sum of 24 Exp(1) terms, variance vs Gamma(24,1)", std::abs(var - n) <= var_limit,
          std::abs(var - n), var_limit);
}

void check_pdf_scaling(Battery& b) {
  const analytics::GammaParams base{3.5, 0.8};
  const double a = 2.25;
  double worst = 0.0;
  for (double x : {0.3, 1.0, 2.7, 5.0, 11.0}) {
    const double scaled = analytics::gamma_pdf(x, {base.shape, a * base.scale});
    const double change_of_var = analytics::gamma_pdf(x / a, base) / a;
    worst = std::max(worst, std::abs(scaled - change_of_var) / change_of_var);
  }
  b.check("gamma pdf scale parameter = change of variables", worst <= 1e-12, worst, 1e-12);
}

void check_moment_preservation(Battery& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.2, 4.0);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<analytics::GammaParams> parts(5);
    double mean = 0.0, var = 0.0;
    for (auto& p : parts) {
      p = {unif(rng), unif(rng)};
      mean += p.mean();
      var += p.variance();
    }
    const auto fit = analytics::second_order_approx(parts);
    worst = std::max(worst, std::abs(fit.mean() - mean) / mean);
    worst = std::max(worst, std::abs(fit.variance() - var) / var);
  }
  b.check("moment-matched gamma fit preserves mean and variance", worst <= 1e-12, worst, 1e-12);

  const auto [proj, m2] = analytics::projection_power(3, 8, {8.0, 0.5});
  const double m2_direct = proj.variance() + proj.mean() * proj.mean();
  const double err = std::abs(m2 - m2_direct) / m2_direct;
  b.check("coordinate-projection law second moment", err <= 1e-12, err, 1e-12);
}

SystemConfig iid_reference_config(std::uint64_t seed) {
  SystemConfig config;
  config.antennas = 8;
  config.tx_power_w = 1.0;
  config.antenna_gain_db = 0.0;
  config.seed = seed;
  config.correlation = CorrelationModel::Iid;
  config.clusters.assign(1, ClusterConfig{});
  config.clusters[0].terminals = 8;
  config.clusters[0].rician_kappa = 0.0;
  config.clusters[0].pathloss_db = 0.0;
  return config;
}

void check_power_law(Battery& b, const std::string& name, sim::Scheme scheme,
                     const analytics::GammaParams& law, std::int64_t trials, std::uint64_t seed) {
  const SystemConfig config = iid_reference_config(seed);
  const EhCircuit circuit;
  const auto records = sim::run_trials(config, circuit, scheme, trials);
  std::vector<double> samples;
  samples.reserve(records.size());
  for (const auto& r : records) samples.push_back(r.sum_power_rf);

  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= static_cast<double>(samples.size() - 1);

  const double mean_err = std::abs(mean - law.mean()) / law.mean();
  const double var_err = std::abs(var - law.variance()) / law.variance();
  const double ks = ks_distance(std::move(samples), law);
  const double mean_limit = b.stat_limit(0.02 * b.widen);
  const double var_limit = b.stat_limit(0.10 * b.widen);
  const double ks_limit = b.stat_limit(0.02 * b.widen);
  b.check(name + " mean", mean_err <= mean_limit, mean_err, mean_limit);
  b.check(name + " variance", var_err <= var_limit, var_err, var_limit);
  b.check(name + " KS distance", ks <= ks_limit, ks, ks_limit);
}

void check_svd_optimality(Battery& b, std::int64_t trials, std::mt19937_64& rng) {
  const std::int64_t draws = std::max<std::int64_t>(1000, trials / 10);
  double worst_margin = 1.0;  // min over instances of best_random / optimal
  for (int rep = 0; rep < 5; ++rep) {
    cmat a(24, 8);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = complex_gaussian(rng);
    double sigma_max = 0.0;
    const cvec x_opt = precoding::top_right_singular(a, &sigma_max);
    const double p_opt = (a * x_opt).squaredNorm();
    double best_random = 0.0;
    for (std::int64_t d = 0; d < draws; ++d) {
      const cvec x = random_sphere_point(8, 1.0, rng);
      best_random = std::max(best_random, (a * x).squaredNorm());
    }
    worst_margin = std::min(worst_margin, best_random / p_opt);
  }
  b.check("top singular vector beats random unit vectors", worst_margin < 1.0, worst_margin, 1.0);
}

}  // namespace

bool run(const Options& options, std::ostream& out) {
  Battery b{out};
  b.widen = std::sqrt(1e4 / static_cast<double>(std::max<std::int64_t>(options.trials, 1)));
  b.corrupt = options.corrupt_tolerances;

  auto rng = make_stream(options.seed, 0x5E1FC8ECULL, 0);

  check_real_embedding(b, rng);
  check_magnitude_law(b, options.trials, rng);
  check_exponential_sum(b, options.trials, rng);
  check_pdf_scaling(b);
  check_moment_preservation(b, rng);

  const double beta = analytics::beta_eq(1.0, 1.0, 1.0);
  check_power_law(b, "all-antenna sum power vs Gamma(8, 1)", sim::Scheme::Aa,
                  analytics::aa_baseline(8, 1, beta), options.trials, options.seed);
  check_power_law(b, "switched-antenna sum power vs Gamma(64, 1/8)", sim::Scheme::Sa,
                  analytics::sa_baseline(8, 8, 1, beta), options.trials, options.seed);

  check_svd_optimality(b, options.trials, rng);

  out << (b.all_pass ? "self-check: all checks passed\n" : "self-check: FAILURES detected\n");
  return b.all_pass;
}

}  // namespace wetsim::selfcheck
