#include "ellroll/metric.hpp"

#include <cmath>

namespace ellroll {

InertiaTensor inertia(const SemiAxes& ax) {
  const double a2 = ax.a() * ax.a(), b2 = ax.b() * ax.b(),
               c2 = ax.c() * ax.c();
  const double s = ax.m() / 5.0;
  return InertiaTensor{s * (b2 + c2), s * (a2 + c2), s * (a2 + b2)};
}

Mat3 euler_rate_to_omega(const ChartPoint& chart) {
  const double st = std::sin(chart.theta()), ct = std::cos(chart.theta());
  const double sp = std::sin(chart.psi()), cp = std::cos(chart.psi());
  Mat3 L;
  L << sp * st, cp, 0.0,
      cp * st, -sp, 0.0,
      ct, 0.0, 1.0;
  return L;
}

Vec3 body_angular_velocity(const ChartPoint& chart, const Vec3& rates) {
  return euler_rate_to_omega(chart) * rates;
}

MetricMatrix5 metric_matrix(const SemiAxes& ax, const ChartPoint& chart) {
  const Mat3 L = euler_rate_to_omega(chart);
  const Mat3 II = inertia(ax).matrix();
  const HeightInfo h = height(ax, chart);
  // zdot as a linear map of the rates: (0, dz/dth, dz/dps).
  const Vec3 zrow(0.0, h.dz_dtheta, h.dz_dpsi);

  MetricMatrix5 M = MetricMatrix5::Zero();
  M.topLeftCorner<3, 3>() =
      L.transpose() * II * L + ax.m() * (zrow * zrow.transpose());
  M(3, 3) = ax.m();
  M(4, 4) = ax.m();
  // Symmetrize to kill the last-bit asymmetry of the triple product.
  M.topLeftCorner<3, 3>() =
      0.5 * (M.topLeftCorner<3, 3>() + M.topLeftCorner<3, 3>().transpose())
          .eval();
  return M;
}

double inner(const MetricMatrix5& M, const TangentCoords& u,
             const TangentCoords& v) {
  return u.vec().dot(M * v.vec());
}

}  // namespace ellroll
