#pragma once

#include <string>

#include "ellroll/dynamics.hpp"
#include "ellroll/liouville.hpp"
#include "ellroll/measure_check.hpp"

namespace ellroll {

/// All CSV output uses 17 significant digits so that files diff
/// meaningfully across runs and platforms.
std::string format_full(double v);

/// Columns: t, gamma1..3, K1..3, energy, gamma_norm_err.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Columns: t, theta, psi, p_alpha1, p_alpha2, p_a, H.
void write_quasi_trajectory_csv(const std::string& path,
                                const QuasiTrajectory& traj);

/// Columns: theta, psi, trace_numeric, trace_closed (NaN for values the
/// sweep mode did not compute).
void write_trace_grid_csv(const std::string& path, const SweepResult& sweep);

/// Columns: theta, psi, Omega1..3, residual, rel_residual.
void write_divergence_csv(const std::string& path,
                          const DivergenceReport& report);

/// Columns: t, theta_vectorial, psi_vectorial, theta_quasi, psi_quasi,
/// energy_vectorial, hamiltonian_quasi.
void write_compare_csv(const std::string& path, const BackendComparison& cmp);

}  // namespace ellroll
