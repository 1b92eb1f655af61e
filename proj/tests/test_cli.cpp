#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string cli = WETSIM_CLI_PATH;

int run(const std::string& args, const std::string& log = "/dev/null") {
  const std::string command = cli + " " + args + " >" + log + " 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("wetsim_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

fs::path write_config(const fs::path& dir, const std::string& text,
                      const std::string& name = "scenario.cfg") {
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << text;
  return p;
}

const char* small_scenario = R"(antennas = 4
tx_power_w = 1
seed = 7
trials = 25

[cluster]
terminals = 2
angle_deg = 40
kappa = 5
pathloss_db = -10

[cluster]
terminals = 2
angle_deg = 120
kappa = 5
pathloss_db = -10
)";

}  // namespace

TEST_CASE("simulate writes samples, summary and manifest") {
  TempDir tmp;
  const auto cfg = write_config(tmp.path, small_scenario);
  const auto out = tmp.path / "run";
  const int code =
      run("simulate --config " + cfg.string() + " --scheme stat_multi --out " + out.string());
  CHECK(code == 0);

  const std::string csv = slurp(out / "stat_multi_samples.csv");
  CHECK(count_lines(csv) == 26);  // header + 25 trials
  CHECK(csv.rfind("trial,sum_power_w,harvested_w,cluster_0_w,cluster_1_w,feasible", 0) == 0);

  const std::string summary = slurp(out / "stat_multi_summary.json");
  CHECK(summary.find("\"mean_w\"") != std::string::npos);
  CHECK(summary.find("\"scheme\": \"stat_multi\"") != std::string::npos);

  const std::string manifest = slurp(out / "manifest.json");
  CHECK(manifest.find("\"seed\": 7") != std::string::npos);
  CHECK(manifest.find("stat_multi_samples.csv") != std::string::npos);
}

TEST_CASE("identical seeds reproduce identical sample files") {
  TempDir tmp;
  const auto cfg = write_config(tmp.path, small_scenario);
  const auto out_a = tmp.path / "a";
  const auto out_b = tmp.path / "b";
  CHECK(run("simulate --config " + cfg.string() + " --scheme aa --trials 10 --out " +
            out_a.string()) == 0);
  CHECK(run("simulate --config " + cfg.string() + " --scheme aa --trials 10 --out " +
            out_b.string()) == 0);
  CHECK(slurp(out_a / "aa_samples.csv") == slurp(out_b / "aa_samples.csv"));

  const auto out_c = tmp.path / "c";
  CHECK(run("simulate --config " + cfg.string() + " --scheme aa --trials 10 --seed 99 --out " +
            out_c.string()) == 0);
  CHECK(slurp(out_a / "aa_samples.csv") != slurp(out_c / "aa_samples.csv"));
}

TEST_CASE("single deterministic trial emits one row") {
  TempDir tmp;
  const auto cfg = write_config(tmp.path, "antennas = 4\ntrials = 1\n[cluster]\nterminals = 2\n"
                                          "angle_deg = 50\nkappa = inf\n");
  const auto out = tmp.path / "once";
  CHECK(run("simulate --config " + cfg.string() + " --scheme stat_multi --out " + out.string()) ==
        0);
  CHECK(count_lines(slurp(out / "stat_multi_samples.csv")) == 2);
}

TEST_CASE("parallel execution does not change the output bytes") {
  TempDir tmp;
  const auto cfg = write_config(tmp.path, small_scenario);
  const auto out_serial = tmp.path / "serial";
  const auto out_parallel = tmp.path / "parallel";
  CHECK(run("simulate --config " + cfg.string() + " --scheme full_csit --out " +
            out_serial.string()) == 0);
  CHECK(run("simulate --config " + cfg.string() + " --scheme full_csit --parallel 4 --out " +
            out_parallel.string()) == 0);
  CHECK(slurp(out_serial / "full_csit_samples.csv") ==
        slurp(out_parallel / "full_csit_samples.csv"));
}

TEST_CASE("usage and configuration failures use distinct exit codes") {
  TempDir tmp;
  const auto cfg = write_config(tmp.path, small_scenario);

  CHECK(run("") == 2);                 // missing subcommand
  CHECK(run("simulate") == 2);         // missing required flags
  CHECK(run("simulate --config " + cfg.string() + " --scheme warp_drive") == 2);
  CHECK(run("sweep --config " + cfg.string() +
            " --scheme aa --param bogus --values 1,2") == 2);
  CHECK(run("sweep --config " + cfg.string() +
            " --scheme aa --param kappa --values 5:-1:0") == 2);

  CHECK(run("simulate --config " + tmp.path.string() + "/missing.cfg --scheme aa") == 3);
  const auto broken = write_config(tmp.path, "antennas = -3\n[cluster]\nterminals = 1\n",
                                   "broken.cfg");
  const auto log = tmp.path / "stderr.txt";
  CHECK(run("simulate --config " + broken.string() + " --scheme aa", log.string()) == 3);
  CHECK(slurp(log).find("antennas") != std::string::npos);
}

TEST_CASE("fully infeasible constrained runs exit with the infeasibility code") {
  TempDir tmp;
  // Global keys must precede the [cluster] sections.
  const auto cfg = write_config(tmp.path,
                                "eh_sensitivity_w = 0.5\neh_saturation_w = 1.0\n"
                                "solver_multistarts = 2\nsolver_max_outer = 30\n" +
                                    std::string(small_scenario));
  const auto out = tmp.path / "infeasible";
  CHECK(run("simulate --config " + cfg.string() +
            " --scheme constrained_stat --trials 2 --out " + out.string()) == 4);
}

TEST_CASE("sweep emits one row per value and scheme") {
  TempDir tmp;
  const auto cfg = write_config(tmp.path, small_scenario);
  const auto out = tmp.path / "sweep";
  CHECK(run("sweep --config " + cfg.string() +
            " --scheme aa,stat_multi --param rotation --values 0:45:90 --trials 5 --out " +
            out.string()) == 0);
  const std::string csv = slurp(out / "sweep_rotation.csv");
  CHECK(count_lines(csv) == 1 + 3 * 2);
  CHECK(csv.find("rotation,0,aa,5,") != std::string::npos);
  CHECK(csv.find("rotation,90,stat_multi,5,") != std::string::npos);
}

TEST_CASE("self-check command gates on its battery") {
  CHECK(run("selfcheck --trials 400 --seed 3") == 0);
  CHECK(run("selfcheck --trials 400 --seed 3 --inject-tolerance-corruption") == 5);
}
