#pragma once

#include "ellroll/metric.hpp"

namespace ellroll {

/// The SE(2)-invariant frame of the constraint distribution D at one
/// configuration:
///   Z  = d/dphi + A d/dx + B d/dy          (spans D's vertical line)
///   X1 = d/dtheta + z sin(phi) d/dx - z cos(phi) d/dy
///   X2 = d/dpsi + E d/dx + F d/dy
/// and the metric-orthogonalized horizontal fields
///   Y_alpha = X_alpha - mu_alpha Z,  mu_alpha = G(Z, X_alpha) / G(Z, Z),
/// so that G(Z, Y_alpha) = 0.
struct FrameAtPoint {
  TangentCoords Z;
  TangentCoords X1;
  TangentCoords X2;
  TangentCoords Y1;
  TangentCoords Y2;
  double mu1;  ///< Gram-Schmidt coefficient of Y1
  double mu2;  ///< Gram-Schmidt coefficient of Y2
};

FrameAtPoint frame_fields(const SemiAxes& ax, const ConfigCoords& q);

/// Gram matrix T of (Z, X1, X2) under the kinetic-energy metric,
/// symmetric positive definite, a function of (theta, psi) only. The
/// evaluation configuration phi is irrelevant by SE(2) invariance; it is
/// exposed for the tests that assert exactly that.
using GramT = Mat3;

GramT gram_T(const SemiAxes& ax, const ChartPoint& chart,
             double phi = kReferencePhi);

/// Determinant of T via its Cholesky factor. Throws NonPositiveDefinite
/// if the factorization fails.
double gram_T_det(const GramT& T);

/// Metric-orthogonal projection onto D, expressed in the (Z, X1, X2)
/// basis: coeffs solves T coeffs = (G(Z,v), G(X1,v), G(X2,v)) by
/// Cholesky, and projection = coeffs_0 Z + coeffs_1 X1 + coeffs_2 X2.
struct ProjectionResult {
  Vec3 coeffs;
  TangentCoords projection;
};

ProjectionResult project_D(const SemiAxes& ax, const ConfigCoords& q,
                           const TangentCoords& v);

/// Same projection against an already-built frame and metric; used by
/// the hot loops that evaluate many vectors at one configuration.
ProjectionResult project_D(const FrameAtPoint& frame, const MetricMatrix5& M,
                           const TangentCoords& v);

}  // namespace ellroll
