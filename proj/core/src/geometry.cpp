#include "ellroll/geometry.hpp"

#include <cmath>
#include <sstream>

namespace ellroll {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

[[noreturn]] void fail_arg(const std::string& what) {
  throw std::invalid_argument(what);
}

}  // namespace

bool is_axisymmetric(SymmetryClass cls) {
  return cls == SymmetryClass::AxisymmetricAB ||
         cls == SymmetryClass::AxisymmetricAC ||
         cls == SymmetryClass::AxisymmetricBC;
}

SemiAxes::SemiAxes(double a, double b, double c, double m)
    : a_(a), b_(b), c_(c), m_(m) {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(a) || !ok(b) || !ok(c) || !ok(m)) {
    std::ostringstream os;
    os << "SemiAxes requires finite positive (a, b, c, m), got (" << a << ", "
       << b << ", " << c << ", " << m << ")";
    fail_arg(os.str());
  }
}

SymmetryClass SemiAxes::symmetry_class() const {
  if (a_ == b_ && b_ == c_) return SymmetryClass::Sphere;
  if (a_ == b_) return SymmetryClass::AxisymmetricAB;
  if (a_ == c_) return SymmetryClass::AxisymmetricAC;
  if (b_ == c_) return SymmetryClass::AxisymmetricBC;
  return SymmetryClass::Triaxial;
}

double SemiAxes::max_semi_axis() const {
  return std::max(a_, std::max(b_, c_));
}

bool detail::angle_in_chart_2pi(double angle) {
  return std::isfinite(angle) && angle >= kChartMargin &&
         angle <= kTwoPi - kChartMargin;
}

bool detail::angle_in_chart_pi(double angle) {
  return std::isfinite(angle) && angle >= kChartMargin &&
         angle <= kPi - kChartMargin;
}

ChartPoint::ChartPoint(double theta, double psi) : theta_(theta), psi_(psi) {
  if (!detail::angle_in_chart_pi(theta)) {
    std::ostringstream os;
    os << "ChartPoint: theta = " << theta << " outside ["
       << kChartMargin << ", pi - " << kChartMargin << "]";
    fail_arg(os.str());
  }
  if (!detail::angle_in_chart_2pi(psi)) {
    std::ostringstream os;
    os << "ChartPoint: psi = " << psi << " outside ["
       << kChartMargin << ", 2 pi - " << kChartMargin << "]";
    fail_arg(os.str());
  }
}

ConfigCoords::ConfigCoords(double phi_in, ChartPoint chart_in, double x_in,
                           double y_in)
    : phi(phi_in), chart(chart_in), x(x_in), y(y_in) {
  if (!detail::angle_in_chart_2pi(phi)) {
    std::ostringstream os;
    os << "ConfigCoords: phi = " << phi << " outside ["
       << kChartMargin << ", 2 pi - " << kChartMargin << "]";
    fail_arg(os.str());
  }
  if (!std::isfinite(x) || !std::isfinite(y)) {
    fail_arg("ConfigCoords: x, y must be finite");
  }
}

Vec5 TangentCoords::vec() const {
  Vec5 v;
  v << dphi, dtheta, dpsi, dx, dy;
  return v;
}

TangentCoords TangentCoords::from_vec(const Vec5& v) {
  return TangentCoords{v[0], v[1], v[2], v[3], v[4]};
}

Vec3 gamma_from_chart(const ChartPoint& chart) {
  const double st = std::sin(chart.theta());
  const double ct = std::cos(chart.theta());
  const double sp = std::sin(chart.psi());
  const double cp = std::cos(chart.psi());
  return Vec3(st * sp, st * cp, ct);
}

ChartPoint chart_from_gamma(const Vec3& gamma) {
  const double n = gamma.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kDynamicsGammaTol) {
    std::ostringstream os;
    os << "chart_from_gamma: |gamma| = " << n << " is not 1 within "
       << kDynamicsGammaTol;
    fail_arg(os.str());
  }
  const Vec3 g = gamma / n;
  const double theta = std::acos(std::clamp(g[2], -1.0, 1.0));
  double psi = std::atan2(g[0], g[1]);
  if (psi < 0.0) psi += kTwoPi;
  if (!detail::angle_in_chart_pi(theta) || !detail::angle_in_chart_2pi(psi)) {
    std::ostringstream os;
    os << "chart_from_gamma: gamma = (" << g[0] << ", " << g[1] << ", "
       << g[2] << ") is within " << kChartMargin
       << " of the chart's singular set";
    throw PoleProximity(os.str());
  }
  return ChartPoint(theta, psi);
}

Mat3 rotation_matrix(double phi, double theta, double psi) {
  const double sf = std::sin(phi), cf = std::cos(phi);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(psi), cp = std::cos(psi);
  Mat3 g;
  g << cp * cf - ct * sf * sp, -sp * cf - ct * sf * cp, st * sf,
      cp * sf + ct * cf * sp, -sp * sf + ct * cf * cp, -st * cf,
      st * sp, st * cp, ct;
  return g;
}

Vec3 detail::contact_point(const SemiAxes& ax, const Vec3& gamma) {
  const Vec3 u(ax.a() * ax.a() * gamma[0], ax.b() * ax.b() * gamma[1],
               ax.c() * ax.c() * gamma[2]);
  const double w = std::sqrt(u.dot(gamma));
  return -u / w;
}

Vec3 r_from_gamma(const SemiAxes& ax, const Vec3& gamma) {
  if (std::abs(gamma.norm() - 1.0) > kUnitGammaTol) {
    std::ostringstream os;
    os << "r_from_gamma: |gamma| = " << gamma.norm() << " is not 1 within "
       << kUnitGammaTol;
    fail_arg(os.str());
  }
  return detail::contact_point(ax, gamma);
}

Vec3 gamma_from_r(const SemiAxes& ax, const Vec3& r) {
  const double a2 = ax.a() * ax.a(), b2 = ax.b() * ax.b(),
               c2 = ax.c() * ax.c();
  const double q = r[0] * r[0] / a2 + r[1] * r[1] / b2 + r[2] * r[2] / c2;
  if (!std::isfinite(q) || std::abs(q - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "gamma_from_r: point is off the ellipsoid surface, quadratic form = "
       << q;
    fail_arg(os.str());
  }
  const Vec3 u(b2 * c2 * r[0], a2 * c2 * r[1], a2 * b2 * r[2]);
  return -u / u.norm();
}

Mat3 r_jacobian(const SemiAxes& ax, const Vec3& gamma) {
  const Vec3 d(ax.a() * ax.a(), ax.b() * ax.b(), ax.c() * ax.c());
  const Vec3 u = d.cwiseProduct(gamma);
  const double w2 = u.dot(gamma);
  const double w = std::sqrt(w2);
  Mat3 jac = (u * u.transpose()) / (w2 * w);
  jac.diagonal() -= d / w;
  return jac;
}

HeightInfo height(const SemiAxes& ax, const ChartPoint& chart) {
  const double a2 = ax.a() * ax.a(), b2 = ax.b() * ax.b(),
               c2 = ax.c() * ax.c();
  const double st = std::sin(chart.theta()), ct = std::cos(chart.theta());
  const double sp = std::sin(chart.psi()), cp = std::cos(chart.psi());
  const double w = a2 * st * st * sp * sp + b2 * st * st * cp * cp +
                   c2 * ct * ct;
  const double z = std::sqrt(w);
  // dw/dtheta = 2 st ct (a^2 sp^2 + b^2 cp^2 - c^2),
  // dw/dpsi   = 2 st^2 sp cp (a^2 - b^2); z = sqrt(w).
  const double dz_dtheta = st * ct * (a2 * sp * sp + b2 * cp * cp - c2) / z;
  const double dz_dpsi = st * st * sp * cp * (a2 - b2) / z;
  return HeightInfo{z, dz_dtheta, dz_dpsi};
}

ConstraintCoeffs constraint_coeffs(const SemiAxes& ax, double phi,
                                   double theta, double psi) {
  const double a2 = ax.a() * ax.a(), b2 = ax.b() * ax.b(),
               c2 = ax.c() * ax.c();
  const double sf = std::sin(phi), cf = std::cos(phi);
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(psi), cp = std::cos(psi);
  const double z = std::sqrt(a2 * st * st * sp * sp + b2 * st * st * cp * cp +
                             c2 * ct * ct);
  const double s = st / z;
  ConstraintCoeffs k;
  k.A = s * (a2 * (-sp * cp * sf - ct * cf * sp * sp) +
             b2 * (cp * sp * sf - cp * cp * ct * cf) + c2 * cf * ct);
  k.B = s * (a2 * (sp * cp * cf - ct * sf * sp * sp) +
             b2 * (-cp * sp * cf - cp * cp * ct * sf) + c2 * sf * ct);
  k.E = s * (a2 * (-sp * sp * cf - sp * ct * sf * cp) +
             b2 * (-cp * cp * cf + cp * ct * sf * sp));
  k.F = s * (a2 * (-sp * sp * sf + sp * ct * cf * cp) +
             b2 * (-cp * cp * sf - cp * ct * cf * sp));
  return k;
}

}  // namespace ellroll
