#include "ellroll/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ellroll {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return out;
}

}  // namespace

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,gamma1,gamma2,gamma3,K1,K2,K3,energy,gamma_norm_err\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const ReducedState& s = traj.states[i];
    out << format_full(traj.times[i]) << ',' << format_full(s.gamma[0]) << ','
        << format_full(s.gamma[1]) << ',' << format_full(s.gamma[2]) << ','
        << format_full(s.K[0]) << ',' << format_full(s.K[1]) << ','
        << format_full(s.K[2]) << ',' << format_full(traj.energies[i]) << ','
        << format_full(traj.gamma_norm_errors[i]) << '\n';
  }
}

void write_quasi_trajectory_csv(const std::string& path,
                                const QuasiTrajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,theta,psi,p_alpha1,p_alpha2,p_a,H\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const QuasiMomentumState& s = traj.states[i];
    out << format_full(traj.times[i]) << ',' << format_full(s.chart.theta())
        << ',' << format_full(s.chart.psi()) << ','
        << format_full(s.p_alpha[0]) << ',' << format_full(s.p_alpha[1])
        << ',' << format_full(s.p_a) << ','
        << format_full(traj.hamiltonians[i]) << '\n';
  }
}

void write_trace_grid_csv(const std::string& path, const SweepResult& sweep) {
  std::ofstream out = open_out(path);
  out << "theta,psi,trace_numeric,trace_closed\n";
  for (const TraceSample& s : sweep.samples) {
    out << format_full(s.theta) << ',' << format_full(s.psi) << ','
        << format_full(s.numeric) << ',' << format_full(s.closed_form)
        << '\n';
  }
}

void write_divergence_csv(const std::string& path,
                          const DivergenceReport& report) {
  std::ofstream out = open_out(path);
  out << "theta,psi,Omega1,Omega2,Omega3,residual,rel_residual\n";
  for (const DivergenceRecord& r : report.records) {
    out << format_full(r.theta) << ',' << format_full(r.psi) << ','
        << format_full(r.omega[0]) << ',' << format_full(r.omega[1]) << ','
        << format_full(r.omega[2]) << ',' << format_full(r.residual) << ','
        << format_full(r.rel_residual) << '\n';
  }
}

void write_compare_csv(const std::string& path, const BackendComparison& cmp) {
  std::ofstream out = open_out(path);
  out << "t,theta_vectorial,psi_vectorial,theta_quasi,psi_quasi,"
         "energy_vectorial,hamiltonian_quasi\n";
  for (const CompareSample& s : cmp.samples) {
    out << format_full(s.t) << ',' << format_full(s.theta_vectorial) << ','
        << format_full(s.psi_vectorial) << ',' << format_full(s.theta_quasi)
        << ',' << format_full(s.psi_quasi) << ','
        << format_full(s.energy_vectorial) << ','
        << format_full(s.hamiltonian_quasi) << '\n';
  }
}

}  // namespace ellroll
