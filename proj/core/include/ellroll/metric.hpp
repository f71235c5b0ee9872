#pragma once

#include "ellroll/geometry.hpp"

namespace ellroll {

/// Principal moments of inertia of the homogeneous ellipsoid about its
/// center, I = (m/5) diag(b^2 + c^2, a^2 + c^2, a^2 + b^2).
struct InertiaTensor {
  double I1;
  double I2;
  double I3;

  Vec3 diagonal() const { return Vec3(I1, I2, I3); }
  Mat3 matrix() const { return diagonal().asDiagonal(); }
};

InertiaTensor inertia(const SemiAxes& ax);

/// Linear map L(theta, psi) sending Euler rates (phidot, thetadot,
/// psidot) to the body angular velocity Omega; column k is Omega for the
/// k-th unit rate.
Mat3 euler_rate_to_omega(const ChartPoint& chart);

/// Body angular velocity for given Euler-angle rates,
///   Omega = (thdot cos ps + phdot sin ps sin th,
///            -thdot sin ps + phdot cos ps sin th,
///            phdot cos th + psdot).
Vec3 body_angular_velocity(const ChartPoint& chart, const Vec3& rates);

/// The kinetic-energy metric on SO(3) x R^2 as a symmetric positive
/// definite 5x5 matrix in the coordinate order (dphi, dtheta, dpsi, dx,
/// dy), with the holonomic substitution zdot = dz/dth thdot + dz/dps
/// psdot already applied. Entries depend on (theta, psi) only. The
/// matrix is assembled analytically from the linear maps Omega(rates)
/// and zdot(rates); no numerical differentiation is involved.
using MetricMatrix5 = Mat5;

MetricMatrix5 metric_matrix(const SemiAxes& ax, const ChartPoint& chart);

/// Metric pairing u^T M v of two tangent vectors at the chart point M
/// was built for.
double inner(const MetricMatrix5& M, const TangentCoords& u,
             const TangentCoords& v);

}  // namespace ellroll
