// wetsim — Monte Carlo experiments for multi-cluster wireless energy transfer
// beamforming. Subcommands: simulate, sweep, selfcheck.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wetsim/config.hpp"
#include "wetsim/report.hpp"
#include "wetsim/selfcheck.hpp"
#include "wetsim/simulation.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_config = 3;
constexpr int exit_infeasible = 4;
constexpr int exit_selfcheck = 5;

struct CommonArgs {
  std::string config_path;
  std::string scheme_list;
  std::string out_dir = ".";
  std::int64_t trials = 0;        // 0 = take the scenario default
  std::uint64_t seed = 0;
  bool seed_set = false;
  int parallel = 1;
};

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    double start = 0.0, step = 0.0, stop = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || !in.eof())
      throw CLI::ValidationError("--values", "range must be start:step:stop");
    if (step <= 0.0) throw CLI::ValidationError("--values", "range step must be > 0");
    for (double v = start; v <= stop + 1e-9 * step; v += step) values.push_back(v);
    return values;
  }
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--values", "'" + token + "' is not a number");
    }
  }
  if (values.empty()) throw CLI::ValidationError("--values", "no values given");
  return values;
}

std::vector<wetsim::sim::Scheme> parse_schemes(const std::string& list) {
  std::vector<wetsim::sim::Scheme> schemes;
  std::istringstream in(list);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto scheme = wetsim::sim::scheme_from_string(token);
    if (!scheme) throw CLI::ValidationError("--scheme", "unknown scheme '" + token + "'");
    schemes.push_back(*scheme);
  }
  if (schemes.empty()) throw CLI::ValidationError("--scheme", "no scheme given");
  return schemes;
}

wetsim::config::Scenario load_scenario(const CommonArgs& args) {
  auto scenario = wetsim::config::parse_scenario_file(args.config_path);
  if (args.trials > 0) scenario.default_trials = args.trials;
  if (args.seed_set) scenario.system.seed = args.seed;
  return scenario;
}

std::string join_command(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

int run_simulate(const CommonArgs& args, const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto scenario = load_scenario(args);
  const auto schemes = parse_schemes(args.scheme_list);
  std::filesystem::create_directories(args.out_dir);

  wetsim::sim::RunOptions options;
  options.parallelism = args.parallel;
  options.solver = scenario.solver;

  const int clusters = static_cast<int>(scenario.system.clusters.size());
  std::vector<std::string> outputs;
  std::vector<std::string> scheme_names;
  bool any_feasible = false;

  for (const auto scheme : schemes) {
    const auto records = wetsim::sim::run_trials(scenario.system, scenario.circuit, scheme,
                                                 scenario.default_trials, options);
    const auto summary = wetsim::sim::summarize(records);
    if (summary.count > 0) any_feasible = true;

    const std::string base = args.out_dir + "/" + wetsim::sim::to_string(scheme);
    wetsim::report::write_file(base + "_samples.csv",
                               wetsim::report::samples_csv(records, clusters));
    wetsim::report::write_file(
        base + "_summary.json",
        wetsim::report::summary_json(summary, scheme, scenario.default_trials));
    outputs.push_back(base + "_samples.csv");
    outputs.push_back(base + "_summary.json");
    scheme_names.push_back(wetsim::sim::to_string(scheme));

    std::cout << wetsim::sim::to_string(scheme) << ": mean " << summary.mean << " W over "
              << summary.count << " feasible trials";
    if (summary.infeasible > 0) std::cout << " (" << summary.infeasible << " infeasible)";
    std::cout << "\n";
  }

  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  wetsim::report::write_file(
      args.out_dir + "/manifest.json",
      wetsim::report::manifest_json(scenario, command, scheme_names, scenario.default_trials,
                                    scenario.system.seed, outputs, duration));

  if (!any_feasible) {
    std::cerr << "error: every trial was infeasible for the requested scheme(s)\n";
    return exit_infeasible;
  }
  return exit_ok;
}

int run_sweep(const CommonArgs& args, const std::string& param, const std::string& values_spec,
              const std::string& command) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto scenario = load_scenario(args);
  const auto schemes = parse_schemes(args.scheme_list);
  const auto parameter = wetsim::sim::sweep_parameter_from_string(param);
  if (!parameter) throw CLI::ValidationError("--param", "unknown parameter '" + param + "'");
  const auto values = parse_values(values_spec);
  std::filesystem::create_directories(args.out_dir);

  wetsim::sim::RunOptions options;
  options.parallelism = args.parallel;
  options.solver = scenario.solver;

  std::vector<std::pair<wetsim::sim::Scheme, std::vector<wetsim::sim::SweepPoint>>> results;
  bool any_ok = false;
  for (const auto scheme : schemes) {
    auto points = wetsim::sim::sweep(scenario.system, scenario.circuit, scheme, *parameter,
                                     values, scenario.default_trials, options);
    for (const auto& p : points)
      if (p.summary) any_ok = true;
    results.emplace_back(scheme, std::move(points));
  }

  const std::string csv_path = args.out_dir + "/sweep_" + wetsim::sim::to_string(*parameter) +
                               ".csv";
  wetsim::report::write_file(
      csv_path, wetsim::report::sweep_csv(results, *parameter, scenario.default_trials));

  std::vector<std::string> scheme_names;
  for (const auto scheme : schemes) scheme_names.push_back(wetsim::sim::to_string(scheme));
  const std::vector<std::string> outputs{csv_path};
  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  wetsim::report::write_file(
      args.out_dir + "/manifest.json",
      wetsim::report::manifest_json(scenario, command, scheme_names, scenario.default_trials,
                                    scenario.system.seed, outputs, duration));

  std::cout << "sweep over " << wetsim::sim::to_string(*parameter) << ": " << values.size()
            << " values x " << schemes.size() << " scheme(s) -> " << csv_path << "\n";
  if (!any_ok) {
    std::cerr << "error: every sweep point failed\n";
    return exit_infeasible;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for multi-cluster wireless energy transfer beamforming"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string param;
  std::string values_spec;
  std::int64_t check_trials = 10000;
  std::uint64_t check_seed = 1;
  bool corrupt = false;

  auto add_common = [&](CLI::App* cmd, bool needs_scheme) {
    cmd->add_option("--config", args.config_path, "scenario file")->required();
    auto* scheme = cmd->add_option("--scheme", args.scheme_list,
                                   "comma-separated scheme list (aa, sa, mp, stat_single, "
                                   "stat_multi, full_csit, constrained_stat, constrained_full)");
    if (needs_scheme) scheme->required();
    cmd->add_option("--trials", args.trials, "Monte Carlo trials (default from scenario)");
    cmd->add_option("--seed", args.seed, "master seed (default from scenario)")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--out", args.out_dir, "output directory (default .)");
    cmd->add_option("--parallel", args.parallel, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "run one scenario and write samples + summary");
  add_common(simulate, true);

  auto* sweep = app.add_subcommand("sweep", "repeat a scenario over a parameter grid");
  add_common(sweep, true);
  sweep->add_option("--param", param, "kappa | antennas | angle | rotation | clusters")
      ->required();
  sweep->add_option("--values", values_spec, "comma list or start:step:stop range")->required();

  auto* selfcheck = app.add_subcommand("selfcheck", "validate simulation against closed forms");
  selfcheck->add_option("--trials", check_trials, "samples per statistical check");
  selfcheck->add_option("--seed", check_seed, "master seed");
  selfcheck->add_flag("--inject-tolerance-corruption", corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  const std::string command = join_command(argc, argv);
  try {
    if (simulate->parsed()) return run_simulate(args, command);
    if (sweep->parsed()) return run_sweep(args, param, values_spec, command);
    wetsim::selfcheck::Options options;
    options.trials = check_trials;
    options.seed = check_seed;
    options.corrupt_tolerances = corrupt;
    return wetsim::selfcheck::run(options, std::cout) ? exit_ok : exit_selfcheck;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const wetsim::config::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
}
