#pragma once

#include <Eigen/Dense>

#include "ellroll/errors.hpp"

namespace ellroll {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Half-width of the strip removed around each coordinate singularity:
/// the Euler chart is the open box 0 < theta < pi, 0 < phi, psi < 2 pi,
/// and every evaluation in this library stays at least kChartMargin away
/// from its boundary.
inline constexpr double kChartMargin = 1e-4;

/// Reference value of the cyclic angle phi used wherever a quantity is
/// known to be phi-independent but has to be evaluated at some
/// configuration (Gram matrices, structure coefficients, state
/// conversions).
inline constexpr double kReferencePhi = 3.14159265358979323846;

/// Unit-norm tolerance for Poisson vectors at strict API boundaries.
inline constexpr double kUnitGammaTol = 1e-12;

/// Coarse unit-norm guard for the dynamics entry points. It catches
/// passing a non-unit vector where a Poisson vector is expected while
/// tolerating both the monitored 1e-9 drift of long trajectories and
/// the transient off-sphere overshoot of Runge-Kutta stage points
/// (~ dt^2 |Omega|^2 / 2, since gammadot is exactly tangent).
inline constexpr double kDynamicsGammaTol = 1e-3;

enum class SymmetryClass {
  Sphere,          ///< a == b == c
  AxisymmetricAB,  ///< a == b != c
  AxisymmetricAC,  ///< a == c != b
  AxisymmetricBC,  ///< b == c != a
  Triaxial,        ///< all distinct
};

/// Returns true for any of the three axisymmetric classes.
bool is_axisymmetric(SymmetryClass cls);

/// Semi-axis lengths and total mass of the homogeneous ellipsoid. Every
/// other quantity in the library is parameterized by one of these.
class SemiAxes {
 public:
  /// Throws std::invalid_argument unless a, b, c, m are finite and > 0.
  SemiAxes(double a, double b, double c, double m);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double m() const { return m_; }

  /// Classification by exact equality of the stored semi-axes.
  SymmetryClass symmetry_class() const;

  double max_semi_axis() const;

 private:
  double a_, b_, c_, m_;
};

/// A point (theta, psi) of the spherical chart on the shape sphere.
/// Construction accepts theta in [kChartMargin, pi - kChartMargin] and
/// psi in [kChartMargin, 2 pi - kChartMargin] and rejects anything else:
/// the chart is open and the excluded set has measure zero.
class ChartPoint {
 public:
  ChartPoint(double theta, double psi);

  double theta() const { return theta_; }
  double psi() const { return psi_; }

 private:
  double theta_, psi_;
};

/// Local coordinates (phi, theta, psi, x, y) of a configuration in
/// SO(3) x R^2. phi obeys the same shrunk-interval rule as psi.
struct ConfigCoords {
  ConfigCoords(double phi, ChartPoint chart, double x, double y);

  double phi;
  ChartPoint chart;
  double x;
  double y;
};

/// A tangent vector to SO(3) x R^2 in the coordinate basis, with the
/// project-wide component order (dphi, dtheta, dpsi, dx, dy).
struct TangentCoords {
  double dphi = 0.0;
  double dtheta = 0.0;
  double dpsi = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  Vec5 vec() const;
  static TangentCoords from_vec(const Vec5& v);
};

/// Poisson vector of a chart point: the plane's unit normal in the body
/// frame, gamma = (sin theta sin psi, sin theta cos psi, cos theta).
Vec3 gamma_from_chart(const ChartPoint& chart);

/// Inverse of gamma_from_chart. Throws PoleProximity when gamma sits
/// within the margin of the chart's singular set (poles or psi cut).
/// Accepts |gamma| - 1 up to kDynamicsGammaTol and normalizes.
ChartPoint chart_from_gamma(const Vec3& gamma);

/// Attitude matrix g in SO(3) for Euler angles in the x-convention.
/// Columns map body coordinates to space coordinates; gamma = g^T e3.
Mat3 rotation_matrix(double phi, double theta, double psi);

/// Body-frame vector from the center of the ellipsoid to the contact
/// point with the plane,
///   r = -(a^2 g1, b^2 g2, c^2 g3) / sqrt(a^2 g1^2 + b^2 g2^2 + c^2 g3^2).
/// Throws std::invalid_argument unless |gamma| = 1 within kUnitGammaTol.
Vec3 r_from_gamma(const SemiAxes& ax, const Vec3& gamma);

/// Inverse contact map,
///   gamma = -(b^2 c^2 r1, a^2 c^2 r2, a^2 b^2 r3) / sqrt(...),
/// valid for r on the ellipsoid surface (checked to 1e-9 in the
/// quadratic form; throws std::invalid_argument otherwise).
Vec3 gamma_from_r(const SemiAxes& ax, const Vec3& r);

/// Jacobian d r / d gamma of the contact map, as the closed form
///   -diag(a^2,b^2,c^2)/w + u u^T / w^3,  u = diag(a^2,b^2,c^2) gamma,
/// with w = sqrt(gamma . u). Symmetric.
Mat3 r_jacobian(const SemiAxes& ax, const Vec3& gamma);

/// Height of the center above the plane and its chart partials.
struct HeightInfo {
  double z;
  double dz_dtheta;
  double dz_dpsi;
};

/// z(theta, psi) = sqrt(a^2 sin^2 th sin^2 ps + b^2 sin^2 th cos^2 ps
///                      + c^2 cos^2 th), together with the analytic
/// partial derivatives used in the holonomic substitution
/// zdot = dz/dtheta thetadot + dz/dpsi psidot.
HeightInfo height(const SemiAxes& ax, const ChartPoint& chart);

/// The four coefficients of the rolling constraints
///   xdot = A phidot + z sin(phi) thetadot + E psidot,
///   ydot = B phidot - z cos(phi) thetadot + F psidot,
/// exactly as they come out of the first two components of the velocity
/// relation xdot = -gdot r. They do not depend on x, y.
struct ConstraintCoeffs {
  double A;
  double B;
  double E;
  double F;
};

ConstraintCoeffs constraint_coeffs(const SemiAxes& ax, double phi,
                                   double theta, double psi);

namespace detail {

/// Contact map without the unit-norm gate. The closed form is
/// homogeneous of degree zero in gamma, so it self-normalizes for the
/// slightly-off-sphere vectors produced by long integrations.
Vec3 contact_point(const SemiAxes& ax, const Vec3& gamma);

/// Checks phi/psi-type angles against the shrunk (0, 2 pi) interval.
bool angle_in_chart_2pi(double angle);
/// Checks theta against the shrunk (0, pi) interval.
bool angle_in_chart_pi(double angle);

}  // namespace detail

}  // namespace ellroll
