#include "wetsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wetsim::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct Cursor {
  const std::string& file;
  int line = 0;

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(file, line, message); }

  double number(const std::string& value) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) fail("trailing characters after number '" + value + "'");
      return v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail("expected a number, got '" + value + "'");
    }
  }

  std::int64_t integer(const std::string& value) const {
    const double v = number(value);
    const auto i = static_cast<std::int64_t>(std::llround(v));
    if (std::abs(v - static_cast<double>(i)) > 1e-9) fail("expected an integer, got '" + value + "'");
    return i;
  }

  bool boolean(const std::string& value) const {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    fail("expected true/false, got '" + value + "'");
  }
};

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
  Scenario scenario;
  scenario.system.clusters.clear();

  std::istringstream in(text);
  std::string raw;
  Cursor at{name, 0};
  ClusterConfig* cluster = nullptr;  // nullptr while still in the global section

  while (std::getline(in, raw)) {
    ++at.line;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line != "[cluster]") at.fail("unknown section '" + line + "'");
      scenario.system.clusters.emplace_back();
      cluster = &scenario.system.clusters.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) at.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) at.fail("empty key");
    if (value.empty()) at.fail("missing value for '" + key + "'");

    if (cluster) {
      if (key == "terminals")
        cluster->terminals = static_cast<int>(at.integer(value));
      else if (key == "angle_deg")
        cluster->angle_deg = at.number(value);
      else if (key == "aperture_deg")
        cluster->aperture_deg = at.number(value);
      else if (key == "kappa")
        cluster->rician_kappa = value == "inf" ? std::numeric_limits<double>::infinity()
                                               : at.number(value);
      else if (key == "pathloss_db")
        cluster->pathloss_db = at.number(value);
      else if (key == "scatter_aperture_deg")
        cluster->scatter_aperture_deg = at.number(value);
      else
        at.fail("unknown cluster key '" + key + "'");
      continue;
    }

    if (key == "antennas")
      scenario.system.antennas = static_cast<int>(at.integer(value));
    else if (key == "element_spacing")
      scenario.system.element_spacing = at.number(value);
    else if (key == "tx_power_w")
      scenario.system.tx_power_w = at.number(value);
    else if (key == "tx_power_dbm")
      scenario.system.tx_power_w = dbm_to_watts(at.number(value));
    else if (key == "antenna_gain_db")
      scenario.system.antenna_gain_db = at.number(value);
    else if (key == "rotation_deg")
      scenario.system.rotation_deg = at.number(value);
    else if (key == "seed")
      scenario.system.seed = static_cast<std::uint64_t>(at.integer(value));
    else if (key == "correlation") {
      if (value == "one_ring")
        scenario.system.correlation = CorrelationModel::OneRing;
      else if (value == "iid")
        scenario.system.correlation = CorrelationModel::Iid;
      else
        at.fail("unknown correlation model '" + value + "'");
    } else if (key == "freeze_correlation")
      scenario.system.freeze_correlation = at.boolean(value);
    else if (key == "trials")
      scenario.default_trials = at.integer(value);
    else if (key == "eh_sensitivity_w")
      scenario.circuit.sensitivity_w = at.number(value);
    else if (key == "eh_sensitivity_dbm")
      scenario.circuit.sensitivity_w = dbm_to_watts(at.number(value));
    else if (key == "eh_saturation_w")
      scenario.circuit.saturation_w = at.number(value);
    else if (key == "eh_saturation_dbm")
      scenario.circuit.saturation_w = dbm_to_watts(at.number(value));
    else if (key == "eh_efficiency")
      scenario.circuit.efficiency = at.number(value);
    else if (key == "solver_multistarts")
      scenario.solver.multistarts = static_cast<int>(at.integer(value));
    else if (key == "solver_max_outer")
      scenario.solver.max_outer = static_cast<int>(at.integer(value));
    else if (key == "solver_max_inner")
      scenario.solver.max_inner = static_cast<int>(at.integer(value));
    else if (key == "solver_kkt_tol")
      scenario.solver.kkt_tol = at.number(value);
    else if (key == "solver_feas_tol")
      scenario.solver.feas_tol = at.number(value);
    else
      at.fail("unknown key '" + key + "'");
  }

  if (scenario.system.clusters.empty())
    throw ConfigError(name, 0, "scenario defines no [cluster] section");
  if (scenario.default_trials < 1) throw ConfigError(name, 0, "trials must be >= 1");

  try {
    scenario.system.validate();
    scenario.circuit.validate();
  } catch (const std::exception& e) {
    throw ConfigError(name, 0, e.what());
  }
  return scenario;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

std::string scenario_to_text(const Scenario& scenario) {
  std::ostringstream out;
  out.precision(17);
  out << "antennas = " << scenario.system.antennas << "\n";
  out << "element_spacing = " << scenario.system.element_spacing << "\n";
  out << "tx_power_w = " << scenario.system.tx_power_w << "\n";
  out << "antenna_gain_db = " << scenario.system.antenna_gain_db << "\n";
  out << "rotation_deg = " << scenario.system.rotation_deg << "\n";
  out << "seed = " << scenario.system.seed << "\n";
  out << "correlation = "
      << (scenario.system.correlation == CorrelationModel::OneRing ? "one_ring" : "iid") << "\n";
  out << "freeze_correlation = " << (scenario.system.freeze_correlation ? "true" : "false")
      << "\n";
  out << "trials = " << scenario.default_trials << "\n";
  out << "eh_sensitivity_w = " << scenario.circuit.sensitivity_w << "\n";
  out << "eh_saturation_w = " << scenario.circuit.saturation_w << "\n";
  out << "eh_efficiency = " << scenario.circuit.efficiency << "\n";
  out << "solver_multistarts = " << scenario.solver.multistarts << "\n";
  out << "solver_max_outer = " << scenario.solver.max_outer << "\n";
  out << "solver_max_inner = " << scenario.solver.max_inner << "\n";
  out << "solver_kkt_tol = " << scenario.solver.kkt_tol << "\n";
  out << "solver_feas_tol = " << scenario.solver.feas_tol << "\n";
  for (const auto& c : scenario.system.clusters) {
    out << "\n[cluster]\n";
    out << "terminals = " << c.terminals << "\n";
    out << "angle_deg = " << c.angle_deg << "\n";
    out << "aperture_deg = " << c.aperture_deg << "\n";
    out << "kappa = " << c.rician_kappa << "\n";
    out << "pathloss_db = " << c.pathloss_db << "\n";
    out << "scatter_aperture_deg = " << c.scatter_aperture_deg << "\n";
  }
  return out.str();
}

}  // namespace wetsim::config
