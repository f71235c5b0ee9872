#include "ellroll/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "ellroll/measure_check.hpp"

namespace ellroll {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

void check_unit_gamma(const Vec3& gamma, const char* who) {
  const double n = gamma.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > kDynamicsGammaTol) {
    std::ostringstream os;
    os << who << ": |gamma| = " << n << " is not 1 within "
       << kDynamicsGammaTol;
    throw std::invalid_argument(os.str());
  }
}

using Vec6 = Eigen::Matrix<double, 6, 1>;

Vec6 pack(const ReducedState& s) {
  Vec6 y;
  y << s.gamma, s.K;
  return y;
}

ReducedState unpack(const Vec6& y) {
  return ReducedState{y.head<3>(), y.tail<3>()};
}

/// Gram blocks of (Z | Y1, Y2) and the (Z, Y1, Y2) expansion data at one
/// chart point, built at the reference phi.
struct QuasiBlocks {
  FrameAtPoint frame;
  MetricMatrix5 M;
  double k_vert;                // G(Z, Z)
  Eigen::Matrix2d k_horiz;      // Gram of (Y1, Y2)
  Eigen::Matrix2d k_horiz_inv;
};

QuasiBlocks quasi_blocks(const SemiAxes& ax, const ChartPoint& chart) {
  QuasiBlocks b;
  const ConfigCoords q(kReferencePhi, chart, 0.0, 0.0);
  b.frame = frame_fields(ax, q);
  b.M = metric_matrix(ax, chart);
  b.k_vert = inner(b.M, b.frame.Z, b.frame.Z);
  b.k_horiz(0, 0) = inner(b.M, b.frame.Y1, b.frame.Y1);
  b.k_horiz(0, 1) = inner(b.M, b.frame.Y1, b.frame.Y2);
  b.k_horiz(1, 0) = b.k_horiz(0, 1);
  b.k_horiz(1, 1) = inner(b.M, b.frame.Y2, b.frame.Y2);
  const double det = b.k_horiz(0, 0) * b.k_horiz(1, 1) -
                     b.k_horiz(0, 1) * b.k_horiz(1, 0);
  if (!(det > 0.0) || !(b.k_vert > 0.0)) {
    throw NonPositiveDefinite("quasi_blocks: Gram blocks are not SPD");
  }
  b.k_horiz_inv << b.k_horiz(1, 1), -b.k_horiz(0, 1),
      -b.k_horiz(1, 0), b.k_horiz(0, 0);
  b.k_horiz_inv /= det;
  return b;
}

/// Expansion of the D-projection of a vector in the G-orthogonal basis
/// (Z, Y1, Y2): the Gram matrix is block diagonal there.
struct BasisCoeffs {
  double z;
  Eigen::Vector2d y;
};

BasisCoeffs expand_in_zy(const QuasiBlocks& b, const TangentCoords& v) {
  BasisCoeffs c;
  c.z = inner(b.M, b.frame.Z, v) / b.k_vert;
  const Eigen::Vector2d rhs(inner(b.M, b.frame.Y1, v),
                            inner(b.M, b.frame.Y2, v));
  c.y = b.k_horiz_inv * rhs;
  return c;
}

}  // namespace

Mat3 mass_operator(const SemiAxes& ax, const Vec3& gamma) {
  check_unit_gamma(gamma, "mass_operator");
  const Vec3 r = detail::contact_point(ax, gamma);
  Mat3 op = inertia(ax).matrix();
  op += ax.m() * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
  return op;
}

Vec3 omega_from_K(const SemiAxes& ax, const Vec3& gamma, const Vec3& K) {
  const Mat3 op = mass_operator(ax, gamma);
  Eigen::LLT<Mat3> llt(op);
  if (llt.info() != Eigen::Success) {
    throw NonPositiveDefinite("omega_from_K: mass operator is not SPD");
  }
  return llt.solve(K);
}

Vec3 K_from_omega(const SemiAxes& ax, const Vec3& gamma, const Vec3& omega) {
  return mass_operator(ax, gamma) * omega;
}

ReducedState vector_field(const SemiAxes& ax, const ReducedState& s) {
  const Vec3 omega = omega_from_K(ax, s.gamma, s.K);
  const Vec3 gamma_dot = s.gamma.cross(omega);
  const Vec3 r = detail::contact_point(ax, s.gamma);
  const Vec3 r_dot = r_jacobian(ax, s.gamma) * gamma_dot;
  const Vec3 K_dot = s.K.cross(omega) + ax.m() * r_dot.cross(omega.cross(r));
  return ReducedState{gamma_dot, K_dot};
}

double energy(const SemiAxes& ax, const ReducedState& s) {
  check_unit_gamma(s.gamma, "energy");
  const Vec3 omega = omega_from_K(ax, s.gamma, s.K);
  const Vec3 r = detail::contact_point(ax, s.gamma);
  const Vec3 II_omega = inertia(ax).diagonal().cwiseProduct(omega);
  return 0.5 * II_omega.dot(omega) +
         0.5 * ax.m() * omega.cross(r).squaredNorm();
}

Trajectory integrate(const SemiAxes& ax, const ReducedState& s0, double dt,
                     double t_end) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("integrate: dt must be positive");
  }
  if (!(t_end >= dt) || !std::isfinite(t_end)) {
    throw std::invalid_argument("integrate: t_end must be >= dt");
  }
  check_unit_gamma(s0.gamma, "integrate");

  const long n_steps = std::lround(t_end / dt);
  auto rhs = [&](const Vec6& y) { return pack(vector_field(ax, unpack(y))); };

  Trajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.energies.reserve(n_steps + 1);
  traj.gamma_norm_errors.reserve(n_steps + 1);

  auto record = [&](double t, const Vec6& y) {
    if (!y.allFinite()) {
      std::ostringstream os;
      os << "integrate: non-finite state at t = " << t;
      throw NonFinite(os.str());
    }
    const ReducedState s = unpack(y);
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.energies.push_back(energy(ax, s));
    traj.gamma_norm_errors.push_back(std::abs(s.gamma.norm() - 1.0));
  };

  Vec6 y = pack(s0);
  record(0.0, y);
  for (long i = 1; i <= n_steps; ++i) {
    const Vec6 k1 = rhs(y);
    const Vec6 k2 = rhs(y + 0.5 * dt * k1);
    const Vec6 k3 = rhs(y + 0.5 * dt * k2);
    const Vec6 k4 = rhs(y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(i * dt, y);
  }
  return traj;
}

double hamiltonian(const SemiAxes& ax, const QuasiMomentumState& s) {
  const QuasiBlocks b = quasi_blocks(ax, s.chart);
  return 0.5 * (s.p_a * s.p_a / b.k_vert +
                s.p_alpha.dot(b.k_horiz_inv * s.p_alpha));
}

namespace {

/// Momentum-independent data for one hamiltonian_field evaluation.
struct QuasiPointData {
  QuasiBlocks center;
  // Gram blocks at the four difference-stencil neighbors,
  // [direction][side]: direction 0 = theta, 1 = psi; side 0 = +h, 1 = -h.
  double k_vert_s[2][2];
  Eigen::Matrix2d k_horiz_inv_s[2][2];
  double h[2];
  // Structure coefficients. C_from_ZY[beta] holds the expansion of
  // P[Z, Y_beta]; C_from_YY holds P[Y1, Y2].
  BasisCoeffs C_from_ZY[2];
  BasisCoeffs C_from_YY;
};

QuasiPointData quasi_point_data(const SemiAxes& ax, const ChartPoint& chart) {
  const double theta = chart.theta();
  const double psi = chart.psi();
  QuasiPointData d;
  d.h[0] = detail::fd_step(theta);
  d.h[1] = detail::fd_step(psi);

  const bool ok = theta - 2 * d.h[0] >= kChartMargin &&
                  theta + 2 * d.h[0] <= kPi - kChartMargin &&
                  psi - 2 * d.h[1] >= kChartMargin &&
                  psi + 2 * d.h[1] <= kTwoPi - kChartMargin;
  if (!ok) {
    std::ostringstream os;
    os << "hamiltonian_field: (theta, psi) = (" << theta << ", " << psi
       << ") is too close to the chart boundary";
    throw ChartMarginViolation(os.str());
  }

  d.center = quasi_blocks(ax, chart);

  // The pushforward of Y_alpha must be the identity on (theta, psi):
  // Y_alpha differs from X_alpha by a multiple of the vertical Z.
  const FrameAtPoint& f = d.center.frame;
  if (f.Y1.dtheta != 1.0 || f.Y1.dpsi != 0.0 || f.Y2.dtheta != 0.0 ||
      f.Y2.dpsi != 1.0) {
    throw std::logic_error("hamiltonian_field: rho is not the identity");
  }

  for (int dir = 0; dir < 2; ++dir) {
    for (int side = 0; side < 2; ++side) {
      const double delta = (side == 0 ? d.h[dir] : -d.h[dir]);
      const ChartPoint shifted(theta + (dir == 0 ? delta : 0.0),
                               psi + (dir == 1 ? delta : 0.0));
      const QuasiBlocks b = quasi_blocks(ax, shifted);
      d.k_vert_s[dir][side] = b.k_vert;
      d.k_horiz_inv_s[dir][side] = b.k_horiz_inv;
    }
  }

  const ConfigCoords q(kReferencePhi, chart, 0.0, 0.0);
  const TangentCoords b_zy1 =
      lie_bracket(ax, FrameField::Z, FrameField::Y1, q);
  const TangentCoords b_zy2 =
      lie_bracket(ax, FrameField::Z, FrameField::Y2, q);
  const TangentCoords b_yy =
      lie_bracket(ax, FrameField::Y1, FrameField::Y2, q);
  d.C_from_ZY[0] = expand_in_zy(d.center, b_zy1);
  d.C_from_ZY[1] = expand_in_zy(d.center, b_zy2);
  d.C_from_YY = expand_in_zy(d.center, b_yy);
  return d;
}

QuasiDerivative field_from_data(const QuasiPointData& d,
                                const QuasiMomentumState& s) {
  const Eigen::Vector2d w = d.center.k_horiz_inv * s.p_alpha;  // dH/dp_alpha
  const double w_a = s.p_a / d.center.k_vert;                  // dH/dp_a

  // dH/dq by central differences of H at fixed momenta.
  double dHdq[2];
  for (int dir = 0; dir < 2; ++dir) {
    double hs[2];
    for (int side = 0; side < 2; ++side) {
      hs[side] = 0.5 * (s.p_a * s.p_a / d.k_vert_s[dir][side] +
                        s.p_alpha.dot(d.k_horiz_inv_s[dir][side] * s.p_alpha));
    }
    dHdq[dir] = (hs[0] - hs[1]) / (2.0 * d.h[dir]);
  }

  // C_{a beta}^b (Z-coefficient) and C_{a beta}^alpha from P[Z, Y_beta];
  // lower-index skews give the (alpha, b) family.
  const double C_ab[2] = {d.C_from_ZY[0].z, d.C_from_ZY[1].z};
  const Eigen::Vector2d C_aY[2] = {d.C_from_ZY[0].y, d.C_from_ZY[1].y};
  // C_{12}^a and C_{12}^gamma from P[Y1, Y2]; C_{21} = -C_{12}.
  const double C_yy_a = d.C_from_YY.z;
  const Eigen::Vector2d C_yy_g = d.C_from_YY.y;

  QuasiDerivative out;
  out.dtheta = w[0];
  out.dpsi = w[1];

  for (int al = 0; al < 2; ++al) {
    double acc = -dHdq[al];
    for (int be = 0; be < 2; ++be) {
      // sign of C_{al be} relative to the stored C_{12}
      double sgn = 0.0;
      if (al == 0 && be == 1) sgn = 1.0;
      if (al == 1 && be == 0) sgn = -1.0;
      if (sgn != 0.0) {
        // - C_{al be}^gamma p_gamma dH/dp_be  - C_{al be}^a p_a dH/dp_be
        acc -= sgn * (C_yy_g.dot(s.p_alpha) + C_yy_a * s.p_a) * w[be];
      }
    }
    // - C_{al b}^beta p_beta dH/dp_b - C_{al b}^a p_a dH/dp_b,
    // with C_{al b}^J = -C_{b al}^J.
    acc += (C_aY[al].dot(s.p_alpha) + C_ab[al] * s.p_a) * w_a;
    out.dp_alpha[al] = acc;
  }

  // dp_a/dt = -sum_beta (C_{a beta}^alpha p_alpha + C_{a beta}^b p_b)
  //           dH/dp_beta   ([Z, Z] = 0 kills the rest).
  double acc_a = 0.0;
  for (int be = 0; be < 2; ++be) {
    acc_a -= (C_aY[be].dot(s.p_alpha) + C_ab[be] * s.p_a) * w[be];
  }
  out.dp_a = acc_a;
  return out;
}

uint64_t quantize_key(double theta, double psi) {
  // ~6e-14 resolution; collisions identify points far below every
  // tolerance in this module.
  const double scale = 17592186044416.0;  // 2^44
  const auto t = static_cast<uint64_t>(std::llround(theta * scale));
  const auto p = static_cast<uint64_t>(std::llround(psi * scale));
  return t * 0x9E3779B97F4A7C15ull ^ (p + 0x7F4A7C15ull);
}

}  // namespace

class QuasiCache {
 public:
  std::unordered_map<uint64_t, QuasiPointData> map;
};

QuasiDerivative hamiltonian_field(const SemiAxes& ax,
                                  const QuasiMomentumState& s,
                                  QuasiCache* cache) {
  if (cache != nullptr) {
    const uint64_t key = quantize_key(s.chart.theta(), s.chart.psi());
    auto it = cache->map.find(key);
    if (it == cache->map.end()) {
      it = cache->map.emplace(key, quasi_point_data(ax, s.chart)).first;
    }
    return field_from_data(it->second, s);
  }
  return field_from_data(quasi_point_data(ax, s.chart), s);
}

QuasiMomentumState convert_state(const SemiAxes& ax, const ReducedState& s) {
  const ChartPoint chart = chart_from_gamma(s.gamma);
  const Vec3 omega = omega_from_K(ax, s.gamma, s.K);

  // Euler rates reproducing Omega at this chart point.
  const Mat3 L = euler_rate_to_omega(chart);
  const Vec3 rates = L.partialPivLu().solve(omega);

  // Full constrained velocity at the reference configuration.
  const QuasiBlocks b = quasi_blocks(ax, chart);
  const ConstraintCoeffs k =
      constraint_coeffs(ax, kReferencePhi, chart.theta(), chart.psi());
  const double z = height(ax, chart).z;
  TangentCoords qdot;
  qdot.dphi = rates[0];
  qdot.dtheta = rates[1];
  qdot.dpsi = rates[2];
  qdot.dx = k.A * rates[0] + z * std::sin(kReferencePhi) * rates[1] +
            k.E * rates[2];
  qdot.dy = k.B * rates[0] - z * std::cos(kReferencePhi) * rates[1] +
            k.F * rates[2];

  // qdot lies in D, so its D-projection is itself; expand it.
  const ProjectionResult pr = project_D(b.frame, b.M, qdot);
  const TangentCoords residual =
      TangentCoords::from_vec(qdot.vec() - pr.projection.vec());
  const double res = std::sqrt(inner(b.M, residual, residual));
  if (!(res <= 1e-8)) {
    std::ostringstream os;
    os << "convert_state: velocity is not in the constraint distribution, "
          "residual = "
       << res;
    throw std::logic_error(os.str());
  }

  // (Z, X1, X2) coefficients -> (Z, Y1, Y2) quasi-velocities.
  const double v_a =
      pr.coeffs[0] + pr.coeffs[1] * b.frame.mu1 + pr.coeffs[2] * b.frame.mu2;
  const Eigen::Vector2d v_alpha(pr.coeffs[1], pr.coeffs[2]);

  QuasiMomentumState out{chart, b.k_horiz * v_alpha, b.k_vert * v_a};
  return out;
}

ReducedState convert_back(const SemiAxes& ax, const QuasiMomentumState& s) {
  const QuasiBlocks b = quasi_blocks(ax, s.chart);
  const double v_a = s.p_a / b.k_vert;
  const Eigen::Vector2d v_alpha = b.k_horiz_inv * s.p_alpha;
  const Vec5 qdot = v_a * b.frame.Z.vec() + v_alpha[0] * b.frame.Y1.vec() +
                    v_alpha[1] * b.frame.Y2.vec();
  const Vec3 rates(qdot[0], qdot[1], qdot[2]);
  const Vec3 omega = euler_rate_to_omega(s.chart) * rates;
  const Vec3 gamma = gamma_from_chart(s.chart);
  return ReducedState{gamma, K_from_omega(ax, gamma, omega)};
}

QuasiTrajectory integrate_quasi(const SemiAxes& ax,
                                const QuasiMomentumState& s0, double dt,
                                double t_end, bool use_cache) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("integrate_quasi: dt must be positive");
  }
  if (!(t_end >= dt) || !std::isfinite(t_end)) {
    throw std::invalid_argument("integrate_quasi: t_end must be >= dt");
  }

  QuasiCache cache;
  QuasiCache* cache_ptr = use_cache ? &cache : nullptr;

  using YVec = Eigen::Matrix<double, 5, 1>;
  auto pack5 = [](const QuasiMomentumState& s) {
    YVec y;
    y << s.chart.theta(), s.chart.psi(), s.p_alpha[0], s.p_alpha[1], s.p_a;
    return y;
  };
  auto unpack5 = [](const YVec& y) {
    return QuasiMomentumState{ChartPoint(y[0], y[1]),
                              Eigen::Vector2d(y[2], y[3]), y[4]};
  };
  auto rhs = [&](const YVec& y) {
    const QuasiDerivative d = hamiltonian_field(ax, unpack5(y), cache_ptr);
    YVec out;
    out << d.dtheta, d.dpsi, d.dp_alpha[0], d.dp_alpha[1], d.dp_a;
    return out;
  };

  const long n_steps = std::lround(t_end / dt);
  QuasiTrajectory traj;
  auto record = [&](double t, const YVec& y) {
    if (!y.allFinite()) {
      std::ostringstream os;
      os << "integrate_quasi: non-finite state at t = " << t;
      throw NonFinite(os.str());
    }
    const QuasiMomentumState s = unpack5(y);
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.hamiltonians.push_back(hamiltonian(ax, s));
  };

  YVec y = pack5(s0);
  record(0.0, y);
  for (long i = 1; i <= n_steps; ++i) {
    try {
      const YVec k1 = rhs(y);
      const YVec k2 = rhs(y + 0.5 * dt * k1);
      const YVec k3 = rhs(y + 0.5 * dt * k2);
      const YVec k4 = rhs(y + dt * k3);
      y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      record(i * dt, y);
    } catch (const ChartMarginViolation&) {
      traj.truncated = true;
      break;
    } catch (const std::invalid_argument&) {
      // A stage or the update left the valid chart box.
      traj.truncated = true;
      break;
    }
  }
  return traj;
}

BackendComparison compare_backends(const SemiAxes& ax, const ReducedState& s0,
                                   double dt, double t_end) {
  const Trajectory tv = integrate(ax, s0, dt, t_end);
  const QuasiMomentumState q0 = convert_state(ax, s0);
  const QuasiTrajectory tq = integrate_quasi(ax, q0, dt, t_end);

  BackendComparison cmp;
  cmp.truncated = tq.truncated;

  const size_t n = std::min(tv.times.size(), tq.times.size());
  cmp.samples.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    CompareSample s;
    s.t = tv.times[i];
    ChartPoint cv(1.0, 1.0);
    try {
      cv = chart_from_gamma(tv.states[i].gamma);
    } catch (const PoleProximity&) {
      cmp.truncated = true;
      break;
    }
    s.theta_vectorial = cv.theta();
    s.psi_vectorial = cv.psi();
    s.theta_quasi = tq.states[i].chart.theta();
    s.psi_quasi = tq.states[i].chart.psi();
    s.energy_vectorial = tv.energies[i];
    s.hamiltonian_quasi = tq.hamiltonians[i];
    cmp.samples.push_back(s);

    cmp.max_theta_deviation = std::max(
        cmp.max_theta_deviation, std::abs(s.theta_vectorial - s.theta_quasi));
    cmp.max_psi_deviation = std::max(
        cmp.max_psi_deviation, std::abs(s.psi_vectorial - s.psi_quasi));
    cmp.max_energy_gap = std::max(
        cmp.max_energy_gap, std::abs(s.hamiltonian_quasi - s.energy_vectorial));
  }
  return cmp;
}

}  // namespace ellroll
