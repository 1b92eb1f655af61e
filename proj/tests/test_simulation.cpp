#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "wetsim/analytics.hpp"
#include "wetsim/simulation.hpp"
#include "scenarios.hpp"

using namespace wetsim;
using namespace wetsim::sim;

namespace {

bool records_identical(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].trial != b[i].trial) return false;
    if (a[i].feasible != b[i].feasible) return false;
    if (a[i].sum_power_rf != b[i].sum_power_rf) return false;
    if (a[i].sum_power_harvested != b[i].sum_power_harvested) return false;
    if (a[i].per_cluster_rf != b[i].per_cluster_rf) return false;
    if (a[i].per_terminal_rf != b[i].per_terminal_rf) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("harvester transfer curve") {
  const EhCircuit circuit;
  CHECK(harvest(1e-6, circuit) == 0.0);
  CHECK(harvest(168.7e-6, circuit) == doctest::Approx(42.175e-6).epsilon(1e-12));
  CHECK(harvest(1e-3, circuit) == doctest::Approx(77.75e-6).epsilon(1e-12));
  CHECK(harvest(0.0, circuit) == 0.0);
  CHECK_THROWS_AS(harvest(-1e-9, circuit), std::invalid_argument);
}

TEST_CASE("scheme names round-trip") {
  for (const Scheme scheme : all_schemes()) {
    const auto parsed = scheme_from_string(to_string(scheme));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == scheme);
  }
  CHECK(!scheme_from_string("csit_full").has_value());
}

TEST_CASE("trial records are deterministic and scheduling-independent") {
  auto system = testing::reference_scenario();
  const EhCircuit circuit;

  RunOptions serial;
  serial.parallelism = 1;
  RunOptions threaded;
  threaded.parallelism = 3;

  const auto a = run_trials(system, circuit, Scheme::StatMulti, 40, serial);
  const auto b = run_trials(system, circuit, Scheme::StatMulti, 40, threaded);
  const auto c = run_trials(system, circuit, Scheme::StatMulti, 40, serial);
  CHECK(records_identical(a, b));
  CHECK(records_identical(a, c));

  system.seed = 2;
  const auto d = run_trials(system, circuit, Scheme::StatMulti, 40, serial);
  CHECK(!records_identical(a, d));
}

TEST_CASE("deterministic channel collapses the distribution") {
  SystemConfig system;
  system.antennas = 8;
  system.tx_power_w = 2.0;
  system.clusters.assign(1, ClusterConfig{});
  system.clusters[0].terminals = 4;
  system.clusters[0].angle_deg = 40.0;
  system.clusters[0].rician_kappa = std::numeric_limits<double>::infinity();
  const EhCircuit circuit;

  for (const Scheme scheme : {Scheme::StatSingle, Scheme::StatMulti, Scheme::FullCsit}) {
    const auto records = run_trials(system, circuit, scheme, 10);
    for (const auto& r : records)
      CHECK(r.sum_power_rf == doctest::Approx(records[0].sum_power_rf).epsilon(1e-12));
  }
}

TEST_CASE("per-terminal, per-cluster and total powers are consistent") {
  const auto system = testing::reference_scenario();
  const EhCircuit circuit;
  for (const Scheme scheme : {Scheme::Aa, Scheme::Sa, Scheme::StatMulti, Scheme::FullCsit}) {
    const auto records = run_trials(system, circuit, scheme, 25);
    for (const auto& r : records) {
      double terminal_sum = 0.0;
      for (double p : r.per_terminal_rf) terminal_sum += p;
      double cluster_sum = 0.0;
      for (double p : r.per_cluster_rf) cluster_sum += p;
      CHECK(terminal_sum == doctest::Approx(r.sum_power_rf).epsilon(1e-10));
      CHECK(cluster_sum == doctest::Approx(r.sum_power_rf).epsilon(1e-10));
      CHECK(r.per_terminal_rf.size() == 24);
      CHECK(r.per_cluster_rf.size() == 3);

      const double harvest_cap =
          circuit.efficiency * std::min(r.sum_power_rf, 24.0 * circuit.saturation_w);
      CHECK(r.sum_power_harvested <= harvest_cap + 1e-15);
    }
  }
}

TEST_CASE("full channel knowledge dominates the statistical beam per trial") {
  const auto system = testing::reference_scenario();
  const EhCircuit circuit;
  const auto stat = run_trials(system, circuit, Scheme::StatMulti, 30);
  const auto full = run_trials(system, circuit, Scheme::FullCsit, 30);
  for (std::size_t i = 0; i < stat.size(); ++i)
    CHECK(full[i].sum_power_rf >= stat[i].sum_power_rf * (1.0 - 1e-12));
}

TEST_CASE("uncorrelated baselines match the closed-form laws") {
  const auto system = testing::iid_rayleigh_scenario();
  const EhCircuit circuit;
  const std::int64_t trials = 10000;

  const auto aa = summarize(run_trials(system, circuit, Scheme::Aa, trials));
  const auto sa = summarize(run_trials(system, circuit, Scheme::Sa, trials));
  const auto law_aa = analytics::aa_baseline(8, 1, 1.0);
  const auto law_sa = analytics::sa_baseline(8, 8, 1, 1.0);

  CHECK(aa.mean == doctest::Approx(law_aa.mean()).epsilon(0.02));
  CHECK(aa.variance == doctest::Approx(law_aa.variance()).epsilon(0.10));
  CHECK(sa.mean == doctest::Approx(law_sa.mean()).epsilon(0.02));
  CHECK(sa.variance == doctest::Approx(law_sa.variance()).epsilon(0.10));
  CHECK(sa.mean == doctest::Approx(aa.mean).epsilon(0.03));
  const double variance_ratio = aa.variance / sa.variance;
  CHECK(variance_ratio > 4.0);
  CHECK(variance_ratio < 16.0);

  SUBCASE("no beamforming scheme has an edge without spatial structure") {
    // White fading gives every unit-norm beam the same expected return, so
    // the statistical precoders collapse onto the uniform baseline.
    const auto mp = summarize(run_trials(system, circuit, Scheme::Mp, trials));
    const auto stat = summarize(run_trials(system, circuit, Scheme::StatMulti, trials));
    CHECK(mp.mean == doctest::Approx(aa.mean).epsilon(0.03));
    CHECK(stat.mean == doctest::Approx(aa.mean).epsilon(0.03));
  }
}

TEST_CASE("summary statistics") {
  SUBCASE("constant samples have zero variance") {
    std::vector<TrialRecord> records(5);
    for (std::size_t i = 0; i < records.size(); ++i) {
      records[i].trial = static_cast<std::int64_t>(i);
      records[i].sum_power_rf = 3.25;
      records[i].per_cluster_rf = {3.25};
    }
    const auto s = summarize(records);
    CHECK(s.mean == doctest::Approx(3.25));
    CHECK(s.variance == doctest::Approx(0.0));
    CHECK(s.count == 5);
    CHECK(s.histogram.counts.size() >= 1);
  }
  SUBCASE("two-point sample") {
    std::vector<TrialRecord> records(2);
    records[0].sum_power_rf = 0.0;
    records[1].sum_power_rf = 2.0;
    records[0].per_cluster_rf = {0.0};
    records[1].per_cluster_rf = {2.0};
    const auto s = summarize(records);
    CHECK(s.mean == doctest::Approx(1.0));
    CHECK(s.variance == doctest::Approx(2.0));
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(summarize({}), std::invalid_argument);
  }
  SUBCASE("infeasible trials are counted but excluded") {
    std::vector<TrialRecord> records(4);
    for (std::size_t i = 0; i < records.size(); ++i) {
      records[i].sum_power_rf = static_cast<double>(i);
      records[i].per_cluster_rf = {static_cast<double>(i)};
    }
    records[3].feasible = false;
    const auto s = summarize(records);
    CHECK(s.count == 3);
    CHECK(s.infeasible == 1);
    CHECK(s.mean == doctest::Approx(1.0));
  }
  SUBCASE("histogram covers all samples") {
    const auto system = testing::iid_rayleigh_scenario();
    const auto records = run_trials(system, EhCircuit{}, Scheme::Aa, 2000);
    const auto s = summarize(records);
    std::int64_t total = 0;
    for (const auto c : s.histogram.counts) total += c;
    CHECK(total == s.count);
    CHECK(s.histogram.edges.size() == s.histogram.counts.size() + 1);
  }
}

TEST_CASE("sweeps apply parameters and isolate per-value failures") {
  const EhCircuit circuit;

  SUBCASE("cluster count sweep spreads clusters evenly") {
    SystemConfig base;
    base.antennas = 8;
    base.clusters.assign(1, ClusterConfig{});
    base.clusters[0].terminals = 2;
    base.clusters[0].rician_kappa = 5.0;

    const double values[] = {3.0};
    const auto points = sweep(base, circuit, Scheme::StatMulti, SweepParameter::Clusters,
                              values, 15);
    REQUIRE(points.size() == 1);
    REQUIRE(points[0].summary.has_value());

    SystemConfig manual = base;
    manual.clusters.assign(3, base.clusters[0]);
    manual.clusters[0].angle_deg = 45.0;
    manual.clusters[1].angle_deg = 90.0;
    manual.clusters[2].angle_deg = 135.0;
    const auto direct = summarize(run_trials(manual, circuit, Scheme::StatMulti, 15));
    CHECK(points[0].summary->mean == doctest::Approx(direct.mean).epsilon(1e-12));
  }
  SUBCASE("invalid values produce error entries, not aborts") {
    SystemConfig base;
    base.antennas = 4;
    base.clusters.assign(3, ClusterConfig{});
    for (auto& c : base.clusters) c.terminals = 2;

    const double values[] = {2.0, 8.0};  // 2 antennas < 3 clusters is invalid
    const auto points =
        sweep(base, circuit, Scheme::StatMulti, SweepParameter::Antennas, values, 5);
    REQUIRE(points.size() == 2);
    CHECK(!points[0].summary.has_value());
    CHECK(!points[0].error.empty());
    CHECK(points[1].summary.has_value());
  }
  SUBCASE("rotation sweep returns one summary per value") {
    const auto system = testing::reference_scenario();
    const double values[] = {0.0, 45.0, 90.0};
    const auto points =
        sweep(system, circuit, Scheme::Aa, SweepParameter::Rotation, values, 10);
    REQUIRE(points.size() == 3);
    for (const auto& p : points) CHECK(p.summary.has_value());
  }
  SUBCASE("kappa sweep rejects negatives per value") {
    const auto system = testing::reference_scenario();
    const double values[] = {-1.0, 0.0};
    const auto points =
        sweep(system, circuit, Scheme::Aa, SweepParameter::Kappa, values, 5);
    CHECK(!points[0].summary.has_value());
    CHECK(points[1].summary.has_value());
  }
}

TEST_CASE("scheme comparison shares the channel draws") {
  const auto system = testing::reference_scenario();
  const EhCircuit circuit;
  const Scheme schemes[] = {Scheme::StatMulti, Scheme::FullCsit};
  const auto table = compare_schemes(system, circuit, schemes, 20);
  REQUIRE(table.size() == 2);
  CHECK(table[0].first == Scheme::StatMulti);
  CHECK(table[1].second.mean >= table[0].second.mean);
}

TEST_CASE("single-cluster-only scheme enforces its precondition") {
  const auto system = testing::reference_scenario();
  CHECK_THROWS_AS(run_trials(system, EhCircuit{}, Scheme::StatSingle, 3),
                  std::invalid_argument);
}

TEST_CASE("constrained schemes flag infeasible trials instead of aborting") {
  SystemConfig system = testing::reference_scenario();
  const EhCircuit circuit;
  RunOptions options;
  options.solver.multistarts = 2;
  options.solver.max_outer = 40;

  // A floor far above the deliverable power makes every trial infeasible.
  EhCircuit impossible = circuit;
  impossible.sensitivity_w = 1.0;
  impossible.saturation_w = 2.0;
  const auto records = run_trials(system, impossible, Scheme::ConstrainedStat, 3, options);
  const auto s = summarize(records);
  CHECK(s.infeasible == 3);
  CHECK(s.count == 0);
}
