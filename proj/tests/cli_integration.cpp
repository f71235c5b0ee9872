// Drives the built CLI binary end to end: exit codes, artifact files,
// JSON verdicts, and byte-identical reruns. argv[1] is the binary path.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    std::printf("FAIL: %s\n", what.c_str());
    ++failures;
  }
}

int run(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const fs::path& p) {
  return nlohmann::json::parse(slurp(p));
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::printf("usage: cli_integration <path-to-cli>\n");
    return 1;
  }
  const std::string cli = argv[1];
  const fs::path work = fs::temp_directory_path() / "ellroll_cli_test";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string out = " --out " + (work / "run").string();

  // --- check-measure: tri-axial verdict is negative -------------------
  {
    const int rc = run(cli + " check-measure --a 1 --b 2 --c 3 --m 1"
                             " --grid 32 --threads 1" + out);
    check(rc == 0, "check-measure exit code");
    const auto j = load_json(work / "run" / "verdict.json");
    check(j["verdict"]["necessary_condition_holds"] == false,
          "tri-axial verdict");
    check(j["max_cross_check"].get<double>() < 1e-6, "cross check recorded");
    check(j["config"]["grid"] == 32, "config provenance");
    check(first_line(work / "run" / "trace_grid.csv") ==
              "theta,psi,trace_numeric,trace_closed",
          "trace grid header");
  }

  // --- check-measure: solid of revolution -----------------------------
  {
    const int rc = run(cli + " check-measure --a 1 --b 1 --c 2 --m 1"
                             " --grid 32 --threads 1" + out);
    check(rc == 0, "axisymmetric exit code");
    const auto j = load_json(work / "run" / "verdict.json");
    check(j["verdict"]["necessary_condition_holds"] == true,
          "axisymmetric verdict");
    check(j["verdict"]["expected_from_symmetry"] == true,
          "symmetry expectation");
  }

  // --- validation failures map to exit 2 ------------------------------
  check(run(cli + " check-measure --a 1 --b 2 --c 3 --grid 32" + out) == 2,
        "missing --m is a config error");
  check(run(cli + " simulate --a 1 --b 2 --c 3 --m 1 --dt 0" + out) == 2,
        "dt <= 0 is a config error");
  check(run(cli + " simulate --a 1 --b 2 --c 3 --m -1 --dt 1e-3" + out) == 2,
        "negative mass is a config error");
  check(run(cli + " verify-density --a 1 --b 2 --c 3 --m 1 --seed 1"
                  " --density paper" + out) == 2,
        "paper density with a != b is a config error");
  check(run(cli + " verify-density --a 1 --b 1 --c 2 --m 1"
                  " --density paper" + out) == 2,
        "missing seed is a config error");

  // --- simulate: relative equilibrium has flat monitors ---------------
  {
    const int rc = run(cli + " simulate --a 1 --b 2 --c 3 --m 1"
                             " --gamma0 0 0 1 --K0 0 0 2 --dt 1e-3"
                             " --t-end 1" + out);
    check(rc == 0, "simulate exit code");
    const auto j = load_json(work / "run" / "summary.json");
    check(j["max_relative_energy_drift"].get<double>() < 1e-12,
          "equilibrium energy drift");
    check(j["max_gamma_norm_error"].get<double>() < 1e-12,
          "equilibrium gamma drift");
    check(first_line(work / "run" / "trajectory.csv") ==
              "t,gamma1,gamma2,gamma3,K1,K2,K3,energy,gamma_norm_err",
          "trajectory header");
  }

  // --- verify-density: both verdict directions -------------------------
  {
    const int rc = run(cli + " verify-density --a 1 --b 1 --c 2 --m 1"
                             " --density paper --seed 2024 --samples 100"
                             " --trajectories 3" + out);
    check(rc == 0, "verify-density exit code");
    const auto j = load_json(work / "run" / "summary.json");
    check(j["max_rel_residual"].get<double>() <= 1e-5,
          "axisymmetric residual small");
    check(j["liouville"]["max_defect_rel"].get<double>() <= 1e-5,
          "liouville defect small");

    const int rc2 = run(cli + " verify-density --a 1 --b 2 --c 3 --m 1"
                              " --density constant --seed 2024"
                              " --samples 100 --trajectories 0" + out);
    check(rc2 == 0, "constant density run completes");
    const auto j2 = load_json(work / "run" / "summary.json");
    check(j2["max_rel_residual"].get<double>() >= 1e-2,
          "constant density witnessed as non-invariant");
  }

  // --- compare-backends + byte-identical reruns ------------------------
  {
    const std::string cmd = cli + " compare-backends --a 1 --b 2 --c 3"
                                  " --m 1 --dt 1e-3 --t-end 0.5" + out;
    check(run(cmd) == 0, "compare-backends exit code");
    const auto j = load_json(work / "run" / "summary.json");
    check(j["max_theta_deviation"].get<double>() < 1e-6, "theta deviation");
    check(j["max_energy_gap"].get<double>() < 1e-9, "energy gap");
    const std::string csv1 = slurp(work / "run" / "compare.csv");
    const std::string sum1 = slurp(work / "run" / "summary.json");
    check(run(cmd) == 0, "compare-backends rerun");
    check(slurp(work / "run" / "compare.csv") == csv1,
          "rerun produces byte-identical CSV");
    check(slurp(work / "run" / "summary.json") == sum1,
          "rerun produces byte-identical JSON");
    check(first_line(work / "run" / "quasi_trajectory.csv") ==
              "t,theta,psi,p_alpha1,p_alpha2,p_a,H",
          "quasi trajectory header");
  }

  // --- config file: flags win ------------------------------------------
  {
    const fs::path cfg = work / "run.cfg";
    std::ofstream(cfg) << "a=1\nb=1\nc=2\nm=1\ngrid=16\nthreads=1\n";
    const int rc = run(cli + " check-measure --config " + cfg.string() +
                       " --grid 32" + out);
    check(rc == 0, "config file accepted");
    const auto j = load_json(work / "run" / "verdict.json");
    check(j["config"]["grid"] == 32, "command line overrides config file");
    check(j["config"]["a"] == 1.0, "config file fills unset flags");
  }

  if (failures == 0) std::printf("cli integration: all checks passed\n");
  return failures;
}
