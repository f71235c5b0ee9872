#include "ellroll/frame.hpp"

#include <cmath>

namespace ellroll {

FrameAtPoint frame_fields(const SemiAxes& ax, const ConfigCoords& q) {
  const double theta = q.chart.theta();
  const double psi = q.chart.psi();
  const ConstraintCoeffs k = constraint_coeffs(ax, q.phi, theta, psi);
  const double z = height(ax, q.chart).z;

  FrameAtPoint f;
  f.Z = TangentCoords{1.0, 0.0, 0.0, k.A, k.B};
  f.X1 = TangentCoords{0.0, 1.0, 0.0, z * std::sin(q.phi),
                       -z * std::cos(q.phi)};
  f.X2 = TangentCoords{0.0, 0.0, 1.0, k.E, k.F};

  const MetricMatrix5 M = metric_matrix(ax, q.chart);
  const double gzz = inner(M, f.Z, f.Z);
  f.mu1 = inner(M, f.Z, f.X1) / gzz;
  f.mu2 = inner(M, f.Z, f.X2) / gzz;
  f.Y1 = TangentCoords::from_vec(f.X1.vec() - f.mu1 * f.Z.vec());
  f.Y2 = TangentCoords::from_vec(f.X2.vec() - f.mu2 * f.Z.vec());
  return f;
}

GramT gram_T(const SemiAxes& ax, const ChartPoint& chart, double phi) {
  const ConfigCoords q(phi, chart, 0.0, 0.0);
  const FrameAtPoint f = frame_fields(ax, q);
  const MetricMatrix5 M = metric_matrix(ax, chart);
  const TangentCoords* w[3] = {&f.Z, &f.X1, &f.X2};
  GramT T;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      T(i, j) = inner(M, *w[i], *w[j]);
      T(j, i) = T(i, j);
    }
  }
  return T;
}

double gram_T_det(const GramT& T) {
  Eigen::LLT<Mat3> llt(T);
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDefinite("gram_T_det: Cholesky factorization failed");
  }
  const Mat3 L = llt.matrixL();
  const double dl = L(0, 0) * L(1, 1) * L(2, 2);
  return dl * dl;
}

ProjectionResult project_D(const FrameAtPoint& frame, const MetricMatrix5& M,
                           const TangentCoords& v) {
  const TangentCoords* w[3] = {&frame.Z, &frame.X1, &frame.X2};
  GramT T;
  Vec3 rhs;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      T(i, j) = inner(M, *w[i], *w[j]);
      T(j, i) = T(i, j);
    }
    rhs[i] = inner(M, *w[i], v);
  }
  Eigen::LLT<Mat3> llt(T);
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDefinite("project_D: frame Gram matrix is not SPD");
  }
  ProjectionResult out;
  out.coeffs = llt.solve(rhs);
  out.projection = TangentCoords::from_vec(out.coeffs[0] * frame.Z.vec() +
                                           out.coeffs[1] * frame.X1.vec() +
                                           out.coeffs[2] * frame.X2.vec());
  return out;
}

ProjectionResult project_D(const SemiAxes& ax, const ConfigCoords& q,
                           const TangentCoords& v) {
  const FrameAtPoint frame = frame_fields(ax, q);
  const MetricMatrix5 M = metric_matrix(ax, q.chart);
  return project_D(frame, M, v);
}

}  // namespace ellroll
