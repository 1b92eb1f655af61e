#include "wetsim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "wetsim/analytics.hpp"
#include "wetsim/precoding.hpp"
#include "wetsim/rng.hpp"

namespace wetsim::sim {

namespace {

using channel::ClusterStatistics;
using channel::ChannelRealization;

// Trial-stream substream tags: channel draws and solver randomness are kept
// apart so every scheme sees identical channels for a given (seed, trial).
constexpr std::uint64_t substream_channel = 0;
constexpr std::uint64_t substream_solver = 1;
constexpr std::uint64_t frozen_stats_stream = 0xF0F0F0F0F0F0F0F0ULL;

struct SchemeName {
  Scheme scheme;
  const char* name;
};

constexpr SchemeName scheme_names[] = {
    {Scheme::Aa, "aa"},
    {Scheme::Sa, "sa"},
    {Scheme::Mp, "mp"},
    {Scheme::StatSingle, "stat_single"},
    {Scheme::StatMulti, "stat_multi"},
    {Scheme::FullCsit, "full_csit"},
    {Scheme::ConstrainedStat, "constrained_stat"},
    {Scheme::ConstrainedFull, "constrained_full"},
};

std::vector<ClusterStatistics> draw_statistics(const SystemConfig& config,
                                               const std::vector<ClusterStatistics>* frozen,
                                               std::mt19937_64& rng) {
  std::vector<ClusterStatistics> stats;
  stats.reserve(config.clusters.size());
  for (std::size_t l = 0; l < config.clusters.size(); ++l) {
    if (frozen) {
      stats.push_back((*frozen)[l]);
    } else {
      stats.push_back(channel::make_cluster_statistics(config.clusters[l], config, rng));
    }
  }
  return stats;
}

/// Per-terminal measured powers for one trial of the given scheme, plus the
/// feasibility flag for the constrained variants.
struct TrialPowers {
  rvec per_terminal;
  bool feasible = true;
};

TrialPowers measure_trial(const SystemConfig& config, const EhCircuit& circuit, Scheme scheme,
                          std::span<const ClusterStatistics> stats,
                          std::span<const ChannelRealization> realizations,
                          const constrained::SolverOptions& solver, std::mt19937_64& solver_rng) {
  const int total = config.total_terminals();
  TrialPowers out;
  out.per_terminal.resize(total);

  auto measure_beam = [&](const cvec& x) {
    Eigen::Index offset = 0;
    for (const auto& r : realizations) {
      out.per_terminal.segment(offset, r.h_eff.rows()) = precoding::received_powers(r.h_eff, x);
      offset += r.h_eff.rows();
    }
  };

  switch (scheme) {
    case Scheme::Aa:
      measure_beam(precoding::precoder_aa(config.antennas, config.tx_power_w).coeffs);
      break;
    case Scheme::Sa: {
      Eigen::Index offset = 0;
      for (const auto& r : realizations) {
        out.per_terminal.segment(offset, r.h_eff.rows()) =
            precoding::sa_received_power(r.h_eff, config.tx_power_w);
        offset += r.h_eff.rows();
      }
      break;
    }
    case Scheme::Mp: {
      if (stats.size() == 1) {
        measure_beam(precoding::precoder_mp(stats[0].kl_basis, config.tx_power_w).coeffs);
      } else {
        // Multi-cluster generalization: strongest joint scatter direction.
        Eigen::Index rows = 0;
        for (const auto& s : stats) rows += s.rank();
        cmat mp_stack(rows, config.antennas);
        Eigen::Index offset = 0;
        for (const auto& s : stats) {
          mp_stack.middleRows(offset, s.rank()) = s.alpha2 * s.mp_factor();
          offset += s.rank();
        }
        measure_beam(std::sqrt(config.tx_power_w) * precoding::top_right_singular(mp_stack));
      }
      break;
    }
    case Scheme::StatSingle:
    case Scheme::StatMulti: {
      const auto tag = scheme == Scheme::StatSingle ? precoding::SchemeTag::StatSingle
                                                    : precoding::SchemeTag::StatMulti;
      const auto stacked = precoding::build_stat_matrix(stats);
      measure_beam(precoding::precoder_stat(stacked, config.tx_power_w, tag).coeffs);
      break;
    }
    case Scheme::FullCsit:
      measure_beam(precoding::precoder_full_csit(realizations, config.tx_power_w).coeffs);
      break;
    case Scheme::ConstrainedStat:
    case Scheme::ConstrainedFull: {
      auto problem =
          scheme == Scheme::ConstrainedStat
              ? constrained::ConstrainedProblem::statistical(stats, config.tx_power_w,
                                                             circuit.sensitivity_w,
                                                             circuit.saturation_w, solver)
              : constrained::ConstrainedProblem::full_csit(realizations, config.tx_power_w,
                                                           circuit.sensitivity_w,
                                                           circuit.saturation_w, solver);
      const cvec warm =
          std::sqrt(config.tx_power_w) * precoding::top_right_singular(problem.objective);
      const auto solution = constrained::solve_constrained(problem, warm, solver_rng);
      out.feasible = solution.status != constrained::SolveStatus::Infeasible;
      measure_beam(solution.beam.coeffs);
      break;
    }
  }
  return out;
}

}  // namespace

std::string to_string(Scheme scheme) {
  for (const auto& entry : scheme_names)
    if (entry.scheme == scheme) return entry.name;
  return "unknown";
}

std::optional<Scheme> scheme_from_string(const std::string& token) {
  for (const auto& entry : scheme_names)
    if (token == entry.name) return entry.scheme;
  return std::nullopt;
}

std::span<const Scheme> all_schemes() {
  static const Scheme list[] = {Scheme::Aa,        Scheme::Sa,           Scheme::Mp,
                                Scheme::StatSingle, Scheme::StatMulti,   Scheme::FullCsit,
                                Scheme::ConstrainedStat, Scheme::ConstrainedFull};
  return list;
}

double harvest(double p_in_w, const EhCircuit& circuit) {
  if (p_in_w < 0.0) throw std::invalid_argument("incident power must be >= 0");
  if (p_in_w < circuit.sensitivity_w) return 0.0;
  if (p_in_w < circuit.saturation_w) return circuit.efficiency * p_in_w;
  return circuit.efficiency * circuit.saturation_w;
}

std::vector<TrialRecord> run_trials(const SystemConfig& config, const EhCircuit& circuit,
                                    Scheme scheme, std::int64_t trials,
                                    const RunOptions& options) {
  config.validate();
  circuit.validate();
  if (trials < 1) throw std::invalid_argument("trial count must be >= 1");
  if (scheme == Scheme::StatSingle && config.clusters.size() != 1)
    throw std::invalid_argument("stat_single requires exactly one cluster");

  const int num_clusters = static_cast<int>(config.clusters.size());

  // Frozen-correlation mode draws the statistics once from a dedicated
  // stream; trials then only redraw the fast fading.
  std::vector<ClusterStatistics> frozen_stats;
  if (config.freeze_correlation) {
    auto rng = make_stream(config.seed, frozen_stats_stream, substream_channel);
    frozen_stats = draw_statistics(config, nullptr, rng);
  }

  std::vector<TrialRecord> records(static_cast<std::size_t>(trials));

  auto run_one = [&](std::int64_t t) {
    auto channel_rng = make_stream(config.seed, static_cast<std::uint64_t>(t), substream_channel);
    auto solver_rng = make_stream(config.seed, static_cast<std::uint64_t>(t), substream_solver);

    const auto stats = draw_statistics(
        config, config.freeze_correlation ? &frozen_stats : nullptr, channel_rng);
    std::vector<ChannelRealization> realizations;
    realizations.reserve(stats.size());
    for (const auto& s : stats) realizations.push_back(channel::realize_channel(s, channel_rng));

    const TrialPowers powers = measure_trial(config, circuit, scheme, stats, realizations,
                                             options.solver, solver_rng);

    TrialRecord rec;
    rec.trial = t;
    rec.scheme = scheme;
    rec.feasible = powers.feasible;
    rec.per_terminal_rf.assign(powers.per_terminal.data(),
                               powers.per_terminal.data() + powers.per_terminal.size());
    rec.per_cluster_rf.assign(num_clusters, 0.0);
    Eigen::Index offset = 0;
    for (int l = 0; l < num_clusters; ++l) {
      const int k = config.clusters[l].terminals;
      rec.per_cluster_rf[l] = powers.per_terminal.segment(offset, k).sum();
      offset += k;
    }
    rec.sum_power_rf = powers.per_terminal.sum();
    double harvested = 0.0;
    for (double p : rec.per_terminal_rf) harvested += harvest(p, circuit);
    rec.sum_power_harvested = harvested;
    records[static_cast<std::size_t>(t)] = std::move(rec);
  };

  const int workers = std::max(1, options.parallelism);
  if (workers == 1) {
    for (std::int64_t t = 0; t < trials; ++t) run_one(t);
  } else {
    std::atomic<std::int64_t> next(0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::int64_t t = next.fetch_add(1);
          if (t >= trials) return;
          run_one(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

StatsSummary summarize(std::span<const TrialRecord> records) {
  if (records.empty()) throw std::invalid_argument("cannot summarize an empty record set");
  StatsSummary s;

  std::vector<double> values;
  values.reserve(records.size());
  const std::size_t clusters = records[0].per_cluster_rf.size();
  std::vector<double> cl_sum(clusters, 0.0), cl_sq(clusters, 0.0);
  double harvested_sum = 0.0;

  for (const auto& r : records) {
    if (!r.feasible) {
      ++s.infeasible;
      continue;
    }
    values.push_back(r.sum_power_rf);
    harvested_sum += r.sum_power_harvested;
    for (std::size_t l = 0; l < clusters; ++l) {
      cl_sum[l] += r.per_cluster_rf[l];
      cl_sq[l] += r.per_cluster_rf[l] * r.per_cluster_rf[l];
    }
  }
  s.count = static_cast<std::int64_t>(values.size());
  if (s.count == 0) return s;

  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.variance = s.count > 1 ? sq / static_cast<double>(s.count - 1) : 0.0;
  s.harvested_mean = harvested_sum / static_cast<double>(s.count);

  s.cluster_mean.resize(clusters);
  s.cluster_variance.resize(clusters);
  for (std::size_t l = 0; l < clusters; ++l) {
    const double m = cl_sum[l] / static_cast<double>(s.count);
    s.cluster_mean[l] = m;
    s.cluster_variance[l] =
        s.count > 1 ? (cl_sq[l] - static_cast<double>(s.count) * m * m) /
                          static_cast<double>(s.count - 1)
                    : 0.0;
  }

  // Freedman-Diaconis binning on the sum power.
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  const double lo = sorted.front();
  const double hi = sorted.back();
  double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  std::size_t bins;
  if (width <= 0.0 || hi <= lo) {
    bins = 1;
    width = std::max(hi - lo, std::max(std::abs(hi), 1.0) * 1e-12);
  } else {
    bins = std::min<std::size_t>(
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / width))), 4096);
    width = (hi - lo) / static_cast<double>(bins);
  }
  s.histogram.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    s.histogram.edges[b] = lo + width * static_cast<double>(b);
  s.histogram.edges.back() = std::max(s.histogram.edges.back(), hi);
  s.histogram.counts.assign(bins, 0);
  for (double v : sorted) {
    std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - lo) / width) : 0;
    if (b >= bins) b = bins - 1;
    ++s.histogram.counts[b];
  }
  return s;
}

std::optional<SweepParameter> sweep_parameter_from_string(const std::string& token) {
  if (token == "kappa") return SweepParameter::Kappa;
  if (token == "antennas") return SweepParameter::Antennas;
  if (token == "angle") return SweepParameter::Angle;
  if (token == "rotation") return SweepParameter::Rotation;
  if (token == "clusters") return SweepParameter::Clusters;
  return std::nullopt;
}

std::string to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::Kappa: return "kappa";
    case SweepParameter::Antennas: return "antennas";
    case SweepParameter::Angle: return "angle";
    case SweepParameter::Rotation: return "rotation";
    case SweepParameter::Clusters: return "clusters";
  }
  return "unknown";
}

namespace {

SystemConfig apply_sweep_value(const SystemConfig& base, SweepParameter parameter, double value) {
  SystemConfig cfg = base;
  switch (parameter) {
    case SweepParameter::Kappa:
      if (value < 0.0) throw std::invalid_argument("kappa must be >= 0");
      for (auto& c : cfg.clusters) c.rician_kappa = value;
      break;
    case SweepParameter::Antennas: {
      const int m = static_cast<int>(std::llround(value));
      if (m < 1 || std::abs(value - m) > 1e-9)
        throw std::invalid_argument("antenna count must be a positive integer");
      cfg.antennas = m;
      break;
    }
    case SweepParameter::Angle:
      // Intended for single-cluster scenarios: repositions every cluster.
      for (auto& c : cfg.clusters) c.angle_deg = value;
      break;
    case SweepParameter::Rotation:
      cfg.rotation_deg = value;
      break;
    case SweepParameter::Clusters: {
      const int count = static_cast<int>(std::llround(value));
      if (count < 1 || std::abs(value - count) > 1e-9)
        throw std::invalid_argument("cluster count must be a positive integer");
      // Evenly spread replicas of the first cluster: angle l*180/(L+1).
      const ClusterConfig proto = cfg.clusters.at(0);
      cfg.clusters.assign(count, proto);
      for (int l = 0; l < count; ++l)
        cfg.clusters[l].angle_deg = 180.0 * (l + 1) / static_cast<double>(count + 1);
      break;
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

std::vector<SweepPoint> sweep(const SystemConfig& config, const EhCircuit& circuit, Scheme scheme,
                              SweepParameter parameter, std::span<const double> values,
                              std::int64_t trials, const RunOptions& options) {
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (double value : values) {
    SweepPoint point;
    point.value = value;
    try {
      const SystemConfig cfg = apply_sweep_value(config, parameter, value);
      point.summary = summarize(run_trials(cfg, circuit, scheme, trials, options));
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<std::pair<Scheme, StatsSummary>> compare_schemes(const SystemConfig& config,
                                                             const EhCircuit& circuit,
                                                             std::span<const Scheme> schemes,
                                                             std::int64_t trials,
                                                             const RunOptions& options) {
  std::vector<std::pair<Scheme, StatsSummary>> result;
  result.reserve(schemes.size());
  for (Scheme scheme : schemes)
    result.emplace_back(scheme, summarize(run_trials(config, circuit, scheme, trials, options)));
  return result;
}

}  // namespace wetsim::sim
