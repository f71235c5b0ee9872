#pragma once

#include <vector>

#include "ellroll/frame.hpp"

namespace ellroll {

/// State of the vectorial reduced dynamics: the Poisson vector and the
/// body angular momentum about the contact point. |gamma| = 1 is a
/// monitored invariant (drift is reported, never projected away).
struct ReducedState {
  Vec3 gamma;
  Vec3 K;
};

/// The symmetric positive definite operator sending Omega to K,
///   K = II Omega + m r x (Omega x r)
///     = (II + m (|r|^2 Id - r r^T)) Omega,
/// with r the contact vector of gamma.
Mat3 mass_operator(const SemiAxes& ax, const Vec3& gamma);

/// SPD solve of K = mass_operator(gamma) Omega for Omega.
Vec3 omega_from_K(const SemiAxes& ax, const Vec3& gamma, const Vec3& K);
/// Forward application K = mass_operator(gamma) Omega.
Vec3 K_from_omega(const SemiAxes& ax, const Vec3& gamma, const Vec3& omega);

/// Right-hand side of the reduced vectorial equations
///   Kdot = K x Omega + m rdot x (Omega x r),  gammadot = gamma x Omega,
/// with rdot expanded through the analytic Jacobian of the contact map.
ReducedState vector_field(const SemiAxes& ax, const ReducedState& s);

/// Kinetic energy of the reduced state,
///   E = 1/2 <II Omega, Omega> + m/2 |Omega x r|^2,
/// using that the center velocity has norm |Omega x r| under rolling.
double energy(const SemiAxes& ax, const ReducedState& s);

/// Fixed-step trajectory with per-step invariant monitors.
struct Trajectory {
  std::vector<double> times;
  std::vector<ReducedState> states;
  std::vector<double> energies;
  std::vector<double> gamma_norm_errors;  ///< | |gamma| - 1 |
};

/// Classical fourth-order Runge-Kutta with fixed step dt up to t_end
/// (n = round(t_end/dt) steps). gamma is never renormalized. Throws
/// NonFinite if the state leaves the finite range, std::invalid_argument
/// for dt <= 0 or t_end < dt.
Trajectory integrate(const SemiAxes& ax, const ReducedState& s0, double dt,
                     double t_end);

/// State of the quasi-momentum backend: shape-chart position and the
/// momenta conjugate to the quasi-velocities taken along (Y1, Y2) and Z.
struct QuasiMomentumState {
  ChartPoint chart;
  Eigen::Vector2d p_alpha;
  double p_a;
};

/// H = 1/2 (p_a^2 / K_vert + p_alpha^T K_horiz^{-1} p_alpha), with
/// K_vert = G(Z,Z) and K_horiz the Gram matrix of (Y1, Y2).
double hamiltonian(const SemiAxes& ax, const QuasiMomentumState& s);

struct QuasiDerivative {
  double dtheta;
  double dpsi;
  Eigen::Vector2d dp_alpha;
  double dp_a;
};

/// Optional memo of the momentum-independent point data (Gram blocks,
/// structure coefficients, difference stencils) keyed by quantized
/// (theta, psi). Default usage recomputes everything per evaluation.
class QuasiCache;

/// Right-hand side of the reduced equations in quasi-momenta:
///   dq/dt     = rho dH/dp_alpha        (rho verified to be the identity)
///   dp_al/dt  = -dH/dq_al - C-terms
///   dp_a/dt   = -C-terms
/// with every structure coefficient obtained from projected brackets of
/// (Z, Y1, Y2) and dH/dq by central differences of the Gram blocks.
/// Throws ChartMarginViolation near the chart boundary.
QuasiDerivative hamiltonian_field(const SemiAxes& ax,
                                  const QuasiMomentumState& s,
                                  QuasiCache* cache = nullptr);

/// Bridges the vectorial state to the quasi-momentum chart at the
/// reference configuration (phi = kReferencePhi, x = y = 0): the full
/// constrained velocity is rebuilt from Omega, expanded in (Z, Y1, Y2),
/// and paired with the Gram blocks. Throws PoleProximity when gamma is
/// outside the shrunk chart.
QuasiMomentumState convert_state(const SemiAxes& ax, const ReducedState& s);
ReducedState convert_back(const SemiAxes& ax, const QuasiMomentumState& s);

struct QuasiTrajectory {
  std::vector<double> times;
  std::vector<QuasiMomentumState> states;
  std::vector<double> hamiltonians;
  /// True when the integration stopped early because the state left the
  /// margin-shrunk chart.
  bool truncated = false;
};

QuasiTrajectory integrate_quasi(const SemiAxes& ax,
                                const QuasiMomentumState& s0, double dt,
                                double t_end, bool use_cache = false);

struct CompareSample {
  double t;
  double theta_vectorial;
  double psi_vectorial;
  double theta_quasi;
  double psi_quasi;
  double energy_vectorial;
  double hamiltonian_quasi;
};

/// Deviation report of the two formulations integrated from matched
/// initial data with the same step.
struct BackendComparison {
  double max_theta_deviation = 0.0;
  double max_psi_deviation = 0.0;
  double max_energy_gap = 0.0;  ///< max_t |H(t) - E(t)|
  bool truncated = false;
  std::vector<CompareSample> samples;
};

BackendComparison compare_backends(const SemiAxes& ax, const ReducedState& s0,
                                   double dt, double t_end);

}  // namespace ellroll
