#include "ellroll/liouville.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ellroll/measure_check.hpp"
#include "ellroll/metric.hpp"
#include "ellroll/rng.hpp"

namespace ellroll {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kFieldFloor = 1e-12;

double closed_form_value(const SemiAxes& ax, const Vec3& gamma) {
  const double a2 = ax.a() * ax.a(), c2 = ax.c() * ax.c();
  const double m = ax.m();
  const Vec3 r = detail::contact_point(ax, gamma);
  const Vec3 II_r = inertia(ax).diagonal().cwiseProduct(r);
  const double first = (m / 5.0) * (a2 + c2) + m * r.squaredNorm();
  const double second =
      std::sqrt((2.0 / 25.0) * m * m * a2 * (a2 + c2) + m * r.dot(II_r));
  return first * second;
}

double chart_factor(const ChartPoint& chart, AreaConvention convention) {
  return convention == AreaConvention::SphereArea ? std::sin(chart.theta())
                                                  : 1.0;
}

}  // namespace

DensityCandidate DensityCandidate::closed_form(const SemiAxes& ax) {
  SemiAxes copy = ax;
  return DensityCandidate(
      Tag::AxisymmetricClosedForm, "axisymmetric_closed_form",
      [copy](const Vec3& gamma) { return closed_form_value(copy, gamma); });
}

DensityCandidate DensityCandidate::constant() {
  return DensityCandidate(Tag::Constant, "constant",
                          [](const Vec3&) { return 1.0; });
}

DensityCandidate DensityCandidate::custom(
    std::string name, std::function<double(const Vec3&)> fn) {
  return DensityCandidate(Tag::Custom, std::move(name), std::move(fn));
}

double density_axisymmetric(const SemiAxes& ax, const Vec3& gamma) {
  if (ax.symmetry_class() != SymmetryClass::AxisymmetricAB &&
      ax.symmetry_class() != SymmetryClass::Sphere) {
    std::ostringstream os;
    os << "density_axisymmetric requires a = b, got (" << ax.a() << ", "
       << ax.b() << ", " << ax.c() << ")";
    throw std::invalid_argument(os.str());
  }
  return closed_form_value(ax, gamma);
}

Vec5 reduced_chart_field(const SemiAxes& ax, const ChartPoint& chart,
                         const Vec3& omega) {
  const Vec3 gamma = gamma_from_chart(chart);
  const ReducedState s{gamma, K_from_omega(ax, gamma, omega)};
  const ReducedState ds = vector_field(ax, s);

  const double st = std::sin(chart.theta());
  const double sp = std::sin(chart.psi()), cp = std::cos(chart.psi());
  const double theta_dot = -ds.gamma[2] / st;
  const double psi_dot = (ds.gamma[0] * cp - ds.gamma[1] * sp) / st;

  // Omegadot = M^{-1}(Kdot - Mdot Omega) with
  // Mdot = m (2 (r . rdot) Id - rdot r^T - r rdot^T).
  const Vec3 r = detail::contact_point(ax, gamma);
  const Vec3 r_dot = r_jacobian(ax, gamma) * ds.gamma;
  Mat3 m_dot = -r_dot * r.transpose() - r * r_dot.transpose();
  m_dot.diagonal().array() += 2.0 * r.dot(r_dot);
  m_dot *= ax.m();
  const Vec3 omega_dot =
      mass_operator(ax, gamma).llt().solve(ds.K - m_dot * omega);

  Vec5 f;
  f << theta_dot, psi_dot, omega_dot;
  return f;
}

DivergenceSample chart_divergence(const SemiAxes& ax,
                                  const DensityCandidate& rho,
                                  const ChartPoint& chart, const Vec3& omega,
                                  AreaConvention convention) {
  if (!omega.allFinite()) {
    throw std::invalid_argument("chart_divergence: Omega must be finite");
  }
  const double x0[5] = {chart.theta(), chart.psi(), omega[0], omega[1],
                        omega[2]};
  double h[5];
  for (int i = 0; i < 5; ++i) h[i] = detail::fd_step(x0[i]);

  const bool ok = x0[0] - h[0] >= kChartMargin &&
                  x0[0] + h[0] <= kPi - kChartMargin &&
                  x0[1] - h[1] >= kChartMargin &&
                  x0[1] + h[1] <= kTwoPi - kChartMargin;
  if (!ok) {
    std::ostringstream os;
    os << "chart_divergence: stencil at (theta, psi) = (" << x0[0] << ", "
       << x0[1] << ") leaves the valid chart";
    throw ChartMarginViolation(os.str());
  }

  auto weighted_component = [&](const double* x, int comp) {
    const ChartPoint pt(x[0], x[1]);
    const Vec3 om(x[2], x[3], x[4]);
    const Vec5 f = reduced_chart_field(ax, pt, om);
    const double w = rho(gamma_from_chart(pt)) * chart_factor(pt, convention);
    return w * f[comp];
  };

  double div = 0.0;
  for (int i = 0; i < 5; ++i) {
    double xp[5], xm[5];
    for (int k = 0; k < 5; ++k) {
      xp[k] = x0[k];
      xm[k] = x0[k];
    }
    xp[i] += h[i];
    xm[i] -= h[i];
    div += (weighted_component(xp, i) - weighted_component(xm, i)) /
           (2.0 * h[i]);
  }

  const Vec5 f0 = reduced_chart_field(ax, chart, omega);
  const double w0 =
      rho(gamma_from_chart(chart)) * chart_factor(chart, convention);
  DivergenceSample out;
  out.divergence = div;
  out.field_scale = w0 * std::max(f0.norm(), kFieldFloor);
  out.relative = std::abs(div) / out.field_scale;
  return out;
}

DivergenceReport divergence_report(const SemiAxes& ax,
                                   const DensityCandidate& rho, int n_samples,
                                   uint64_t seed, const SampleBox& box,
                                   AreaConvention convention) {
  if (n_samples <= 0) {
    throw std::invalid_argument("divergence_report: n_samples must be > 0");
  }
  Rng rng(seed);
  DivergenceReport rep;
  rep.density_name = rho.name();
  rep.records.reserve(n_samples);
  double sum = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double theta =
        rng.uniform(kChartMargin + box.theta_margin,
                    kPi - kChartMargin - box.theta_margin);
    const double psi = rng.uniform(kChartMargin + box.psi_margin,
                                   kTwoPi - kChartMargin - box.psi_margin);
    const ChartPoint chart(theta, psi);
    const Vec3 omega = rng.in_ball(box.omega_max);
    const DivergenceSample s = chart_divergence(ax, rho, chart, omega,
                                                convention);
    rep.records.push_back(
        DivergenceRecord{theta, psi, omega, s.divergence, s.relative});
    sum += s.relative;
    rep.max_rel_residual = std::max(rep.max_rel_residual, s.relative);
  }
  rep.mean_rel_residual = sum / n_samples;
  return rep;
}

LiouvilleResult liouville_trajectory_test(const SemiAxes& ax,
                                          const DensityCandidate& rho,
                                          const ReducedState& s0, double dt,
                                          double t_end,
                                          AreaConvention convention) {
  const Trajectory traj = integrate(ax, s0, dt, t_end);
  LiouvilleResult out;
  for (const ReducedState& s : traj.states) {
    ChartPoint chart(1.0, 1.0);
    Vec3 omega;
    try {
      chart = chart_from_gamma(s.gamma);
      omega = omega_from_K(ax, s.gamma, s.K);
      const DivergenceSample d =
          chart_divergence(ax, rho, chart, omega, convention);
      // defect = div(rho J f) / (rho J), normalized by |f|.
      out.max_defect_rel = std::max(out.max_defect_rel, d.relative);
      ++out.steps_evaluated;
    } catch (const PoleProximity&) {
      out.truncated = true;
      break;
    } catch (const ChartMarginViolation&) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

}  // namespace ellroll
