// Command line front end: reproducible experiments around the rolling
// ellipsoid's reduced dynamics, with CSV/JSON artifacts.
//
// Subcommands: check-measure, simulate, verify-density, compare-backends.
// Exit codes: 0 completed, 2 configuration error, 3 numerical failure.
// Scientific verdicts live in the JSON output, never in the exit code.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellroll/dynamics.hpp"
#include "ellroll/io.hpp"
#include "ellroll/liouville.hpp"
#include "ellroll/measure_check.hpp"
#include "ellroll/rng.hpp"

using namespace ellroll;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Options {
  double a = 0, b = 0, c = 0, m = 0;
  std::string out = ".";
  int grid = 64;
  std::optional<double> tol_zero;
  std::string mode = "both";
  int threads = 0;
  double dt = 1e-3;
  double t_end = 10.0;
  std::vector<double> gamma0 = {0.2, 0.4, 1.0};
  std::vector<double> K0 = {0.3, -0.2, 0.4};
  std::string density = "paper";
  int samples = 200;
  int trajectories = 10;
  double omega_max = 2.0;
  std::optional<uint64_t> seed;
};

SemiAxes make_axes(const Options& o) { return SemiAxes(o.a, o.b, o.c, o.m); }

ReducedState make_state(const Options& o) {
  const Vec3 g(o.gamma0[0], o.gamma0[1], o.gamma0[2]);
  if (g.norm() == 0.0) {
    throw std::invalid_argument("--gamma0 must be a nonzero vector");
  }
  return ReducedState{g.normalized(), Vec3(o.K0[0], o.K0[1], o.K0[2])};
}

std::filesystem::path out_path(const Options& o, const std::string& name) {
  std::filesystem::create_directories(o.out);
  return std::filesystem::path(o.out) / name;
}

ordered_json config_json(const Options& o, const std::string& command) {
  ordered_json j;
  j["command"] = command;
  j["a"] = o.a;
  j["b"] = o.b;
  j["c"] = o.c;
  j["m"] = o.m;
  j["out"] = o.out;
  j["grid"] = o.grid;
  j["tol_zero"] = o.tol_zero ? ordered_json(*o.tol_zero) : ordered_json();
  j["mode"] = o.mode;
  j["threads"] = o.threads;
  j["dt"] = o.dt;
  j["t_end"] = o.t_end;
  j["gamma0"] = o.gamma0;
  j["K0"] = o.K0;
  j["density"] = o.density;
  j["samples"] = o.samples;
  j["trajectories"] = o.trajectories;
  j["omega_max"] = o.omega_max;
  j["seed"] = o.seed ? ordered_json(*o.seed) : ordered_json();
  return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path.string());
  }
  out << j.dump(2) << '\n';
}

void validate_positive(double v, const char* flag) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(flag) + " must be positive");
  }
}

int cmd_check_measure(const Options& o) {
  const SemiAxes ax = make_axes(o);
  if (o.grid < 8) {
    throw std::invalid_argument("--grid must be at least 8");
  }
  SweepMode mode;
  if (o.mode == "numeric") {
    mode = SweepMode::Numeric;
  } else if (o.mode == "closed") {
    mode = SweepMode::ClosedForm;
  } else if (o.mode == "both") {
    mode = SweepMode::Both;
  } else {
    throw std::invalid_argument("--mode must be numeric, closed or both");
  }
  const double tol = o.tol_zero ? *o.tol_zero : default_tol_zero(ax);
  validate_positive(tol, "--tol-zero");

  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult r = sweep_verdict(ax, o.grid, o.grid, tol, mode,
                                      o.threads);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  write_trace_grid_csv(out_path(o, "trace_grid.csv").string(), r);

  ordered_json j;
  j["config"] = config_json(o, "check-measure");
  j["verdict"]["necessary_condition_holds"] =
      r.verdict.necessary_condition_holds;
  j["verdict"]["sup_abs_trace"] = r.verdict.sup_abs_trace;
  j["verdict"]["argmax"]["theta"] = r.verdict.argmax_chart.theta();
  j["verdict"]["argmax"]["psi"] = r.verdict.argmax_chart.psi();
  j["verdict"]["tol_zero"] = r.verdict.tol_zero;
  j["verdict"]["grid"]["n_theta"] = r.verdict.n_theta;
  j["verdict"]["grid"]["n_psi"] = r.verdict.n_psi;
  j["verdict"]["expected_from_symmetry"] = r.verdict.expected_from_symmetry;
  j["max_cross_check"] =
      r.max_cross_check ? ordered_json(*r.max_cross_check) : ordered_json();
  j["runtime_seconds"] = elapsed;
  write_json(out_path(o, "verdict.json"), j);

  std::printf("necessary_condition_holds=%s sup_abs_trace=%s (tol %s)\n",
              r.verdict.necessary_condition_holds ? "true" : "false",
              format_full(r.verdict.sup_abs_trace).c_str(),
              format_full(r.verdict.tol_zero).c_str());
  return 0;
}

int cmd_simulate(const Options& o) {
  const SemiAxes ax = make_axes(o);
  validate_positive(o.dt, "--dt");
  if (!(o.t_end >= o.dt)) {
    throw std::invalid_argument("--t-end must be at least --dt");
  }
  const ReducedState s0 = make_state(o);
  const Trajectory traj = integrate(ax, s0, o.dt, o.t_end);
  write_trajectory_csv(out_path(o, "trajectory.csv").string(), traj);

  const double e0 = traj.energies.front();
  double drift = 0.0, gdrift = 0.0;
  for (size_t i = 0; i < traj.energies.size(); ++i) {
    drift = std::max(drift, std::abs(traj.energies[i] - e0) /
                                std::max(1e-300, std::abs(e0)));
    gdrift = std::max(gdrift, traj.gamma_norm_errors[i]);
  }

  ordered_json j;
  j["config"] = config_json(o, "simulate");
  j["steps"] = traj.times.size() - 1;
  j["initial_energy"] = e0;
  j["max_relative_energy_drift"] = drift;
  j["max_gamma_norm_error"] = gdrift;
  write_json(out_path(o, "summary.json"), j);

  std::printf("final relative energy drift: %s\n", format_full(drift).c_str());
  return 0;
}

int cmd_verify_density(const Options& o) {
  const SemiAxes ax = make_axes(o);
  validate_positive(o.dt, "--dt");
  validate_positive(o.omega_max, "--omega-max");
  if (o.samples <= 0 || o.trajectories < 0) {
    throw std::invalid_argument("--samples/--trajectories out of range");
  }

  DensityCandidate rho = DensityCandidate::constant();
  if (o.density == "paper") {
    const SymmetryClass cls = ax.symmetry_class();
    if (cls != SymmetryClass::AxisymmetricAB && cls != SymmetryClass::Sphere) {
      throw std::invalid_argument(
          "--density paper requires a = b (the closed form assumes the "
          "symmetry axis is the third body axis)");
    }
    rho = DensityCandidate::closed_form(ax);
  } else if (o.density != "constant") {
    throw std::invalid_argument("--density must be paper or constant");
  }

  SampleBox box;
  box.omega_max = o.omega_max;
  const DivergenceReport rep =
      divergence_report(ax, rho, o.samples, *o.seed, box);
  write_divergence_csv(out_path(o, "divergence.csv").string(), rep);

  // trajectory protocol: seeded starts, same generator stream
  Rng rng(*o.seed);
  double worst_defect = 0.0;
  int truncated = 0;
  for (int i = 0; i < o.trajectories; ++i) {
    const ChartPoint start(rng.uniform(0.7, kPi - 0.7),
                           rng.uniform(0.7, kTwoPi - 0.7));
    const ReducedState s0{gamma_from_chart(start), rng.in_ball(0.5)};
    const LiouvilleResult r =
        liouville_trajectory_test(ax, rho, s0, o.dt, o.t_end);
    if (r.truncated) ++truncated;
    worst_defect = std::max(worst_defect, r.max_defect_rel);
  }

  ordered_json j;
  j["config"] = config_json(o, "verify-density");
  j["density"] = rep.density_name;
  j["n_samples"] = o.samples;
  j["max_rel_residual"] = rep.max_rel_residual;
  j["mean_rel_residual"] = rep.mean_rel_residual;
  j["liouville"]["n_trajectories"] = o.trajectories;
  j["liouville"]["max_defect_rel"] = worst_defect;
  j["liouville"]["truncated"] = truncated;
  write_json(out_path(o, "summary.json"), j);

  std::printf("max relative divergence residual: %s\n",
              format_full(rep.max_rel_residual).c_str());
  return 0;
}

int cmd_compare_backends(const Options& o) {
  const SemiAxes ax = make_axes(o);
  validate_positive(o.dt, "--dt");
  if (!(o.t_end >= o.dt)) {
    throw std::invalid_argument("--t-end must be at least --dt");
  }
  const ReducedState s0 = make_state(o);

  const BackendComparison cmp = compare_backends(ax, s0, o.dt, o.t_end);
  write_compare_csv(out_path(o, "compare.csv").string(), cmp);

  // native exports of the two tracks
  const Trajectory tv = integrate(ax, s0, o.dt, o.t_end);
  write_trajectory_csv(out_path(o, "trajectory.csv").string(), tv);
  const QuasiTrajectory tq =
      integrate_quasi(ax, convert_state(ax, s0), o.dt, o.t_end);
  write_quasi_trajectory_csv(out_path(o, "quasi_trajectory.csv").string(), tq);

  ordered_json j;
  j["config"] = config_json(o, "compare-backends");
  j["max_theta_deviation"] = cmp.max_theta_deviation;
  j["max_psi_deviation"] = cmp.max_psi_deviation;
  j["max_energy_gap"] = cmp.max_energy_gap;
  j["truncated"] = cmp.truncated;
  j["steps_compared"] = cmp.samples.size();
  write_json(out_path(o, "summary.json"), j);

  std::printf("max chart deviation: theta %s, psi %s; max |H-E|: %s%s\n",
              format_full(cmp.max_theta_deviation).c_str(),
              format_full(cmp.max_psi_deviation).c_str(),
              format_full(cmp.max_energy_gap).c_str(),
              cmp.truncated ? " (truncated)" : "");
  return 0;
}

void add_axes_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--a", o.a, "Semi-axis a")->required();
  cmd->add_option("--b", o.b, "Semi-axis b")->required();
  cmd->add_option("--c", o.c, "Semi-axis c")->required();
  cmd->add_option("--m", o.m, "Total mass")->required();
  cmd->add_option("--out", o.out, "Output directory")
      ->capture_default_str();
  cmd->set_config("--config", "", "key=value config file (flags win)");
}

void add_state_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--gamma0", o.gamma0,
                  "Initial Poisson vector (normalized on load)")
      ->expected(3)
      ->capture_default_str();
  cmd->add_option("--K0", o.K0, "Initial angular momentum about the contact")
      ->expected(3)
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Invariant-measure tests and reduced dynamics of a homogeneous "
      "ellipsoid rolling without slipping on the plane"};
  app.require_subcommand(1);

  Options check, sim, verify, cmp;

  CLI::App* c1 = app.add_subcommand(
      "check-measure",
      "Sweep the structure-coefficient trace over the shape sphere and "
      "report whether the necessary condition for an invariant measure "
      "holds");
  add_axes_options(c1, check);
  c1->add_option("--grid", check.grid, "Grid size per chart direction")
      ->capture_default_str();
  c1->add_option("--tol-zero", check.tol_zero,
                 "Verdict threshold (default: 1e-8 m^3 max(a,b,c)^6)");
  c1->add_option("--mode", check.mode, "numeric | closed | both")
      ->capture_default_str();
  c1->add_option("--threads", check.threads,
                 "Sweep threads (0 = hardware)")
      ->capture_default_str();

  CLI::App* c2 = app.add_subcommand(
      "simulate", "Integrate the vectorial reduced equations with RK4");
  add_axes_options(c2, sim);
  add_state_options(c2, sim);
  c2->add_option("--dt", sim.dt, "Fixed step")->capture_default_str();
  c2->add_option("--t-end", sim.t_end, "Final time")->capture_default_str();

  CLI::App* c3 = app.add_subcommand(
      "verify-density",
      "Divergence and along-trajectory Liouville tests of a candidate "
      "invariant density");
  add_axes_options(c3, verify);
  c3->add_option("--density", verify.density, "paper | constant")
      ->capture_default_str();
  c3->add_option("--samples", verify.samples, "Divergence sample count")
      ->capture_default_str();
  c3->add_option("--trajectories", verify.trajectories,
                 "Liouville trajectory count")
      ->capture_default_str();
  c3->add_option("--omega-max", verify.omega_max, "Omega sampling radius")
      ->capture_default_str();
  c3->add_option("--seed", verify.seed, "RNG seed (required)")->required();
  c3->add_option("--dt", verify.dt, "Trajectory step")->capture_default_str();
  verify.t_end = 1.0;
  c3->add_option("--t-end", verify.t_end, "Trajectory length")
      ->capture_default_str();

  CLI::App* c4 = app.add_subcommand(
      "compare-backends",
      "Integrate the vectorial and quasi-momentum formulations from "
      "matched initial data and report their deviation");
  add_axes_options(c4, cmp);
  add_state_options(c4, cmp);
  cmp.dt = 1e-4;
  cmp.t_end = 1.0;
  c4->add_option("--dt", cmp.dt, "Fixed step")->capture_default_str();
  c4->add_option("--t-end", cmp.t_end, "Final time")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c1->parsed()) return cmd_check_measure(check);
    if (c2->parsed()) return cmd_simulate(sim);
    if (c3->parsed()) return cmd_verify_density(verify);
    if (c4->parsed()) return cmd_compare_backends(cmp);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const NonPositiveDefinite& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const NonFinite& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const ChartMarginViolation& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const PoleProximity& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
