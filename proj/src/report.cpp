#include "wetsim/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wetsim::report {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json histogram_json(const sim::Histogram& h) {
  return {{"edges", h.edges}, {"counts", h.counts}};
}

nlohmann::json summary_fields(const sim::StatsSummary& s) {
  nlohmann::json j;
  j["mean_w"] = s.mean;
  j["variance_w2"] = s.variance;
  j["harvested_mean_w"] = s.harvested_mean;
  j["count"] = s.count;
  j["infeasible"] = s.infeasible;
  j["cluster_mean_w"] = s.cluster_mean;
  j["cluster_variance_w2"] = s.cluster_variance;
  j["histogram"] = histogram_json(s.histogram);
  return j;
}

}  // namespace

std::string samples_csv(std::span<const sim::TrialRecord> records, int clusters) {
  std::string out = "trial,sum_power_w,harvested_w";
  for (int l = 0; l < clusters; ++l) out += ",cluster_" + std::to_string(l) + "_w";
  out += ",feasible\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial);
    out += ',';
    out += fmt(r.sum_power_rf);
    out += ',';
    out += fmt(r.sum_power_harvested);
    for (int l = 0; l < clusters; ++l) {
      out += ',';
      out += fmt(r.per_cluster_rf[static_cast<std::size_t>(l)]);
    }
    out += r.feasible ? ",1\n" : ",0\n";
  }
  return out;
}

std::string summary_json(const sim::StatsSummary& summary, sim::Scheme scheme,
                         std::int64_t trials) {
  nlohmann::json j = summary_fields(summary);
  j["scheme"] = sim::to_string(scheme);
  j["trials"] = trials;
  return j.dump(2) + "\n";
}

std::string sweep_csv(std::span<const std::pair<sim::Scheme, std::vector<sim::SweepPoint>>> results,
                      sim::SweepParameter parameter, std::int64_t trials) {
  std::string out = "parameter,value,scheme,trials,mean_w,variance_w2,harvested_mean_w,count,"
                    "infeasible,error\n";
  const std::string param = sim::to_string(parameter);
  for (const auto& [scheme, points] : results) {
    const std::string name = sim::to_string(scheme);
    for (const auto& p : points) {
      out += param;
      out += ',';
      out += fmt(p.value);
      out += ',';
      out += name;
      out += ',';
      out += std::to_string(trials);
      if (p.summary) {
        out += ',';
        out += fmt(p.summary->mean);
        out += ',';
        out += fmt(p.summary->variance);
        out += ',';
        out += fmt(p.summary->harvested_mean);
        out += ',' + std::to_string(p.summary->count);
        out += ',' + std::to_string(p.summary->infeasible);
        out += ",\n";
      } else {
        std::string reason = p.error;
        for (char& c : reason)
          if (c == ',' || c == '\n') c = ';';
        out += ",,,,," + reason + "\n";
      }
    }
  }
  return out;
}

std::string manifest_json(const config::Scenario& scenario, const std::string& command,
                          const std::vector<std::string>& schemes, std::int64_t trials,
                          std::uint64_t seed, std::span<const std::string> outputs,
                          double duration_s) {
  nlohmann::json j;
  j["tool"] = tool_version;
  j["command"] = command;
  j["schemes"] = schemes;
  j["trials"] = trials;
  j["seed"] = seed;
  j["scenario"] = config::scenario_to_text(scenario);
  j["outputs"] = std::vector<std::string>(outputs.begin(), outputs.end());
  j["duration_s"] = duration_s;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace wetsim::report
