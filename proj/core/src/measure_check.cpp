#include "ellroll/measure_check.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace ellroll {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
const double kCbrtEps = std::cbrt(std::numeric_limits<double>::epsilon());

struct RawField {
  double c[5];  // dphi, dtheta, dpsi, dx, dy
};

RawField raw(const TangentCoords& t) {
  return RawField{{t.dphi, t.dtheta, t.dpsi, t.dx, t.dy}};
}

}  // namespace

double detail::fd_step(double angle) {
  double h = kCbrtEps * std::max(1.0, std::abs(angle));
  // Make the actual spacing exactly representable around angle.
  volatile double t = angle + h;
  return t - angle;
}

TangentCoords detail::frame_field_at(const SemiAxes& ax, FrameField sel,
                                     double phi, double theta, double psi) {
  switch (sel) {
    case FrameField::Z: {
      const ConstraintCoeffs k = constraint_coeffs(ax, phi, theta, psi);
      return TangentCoords{1.0, 0.0, 0.0, k.A, k.B};
    }
    case FrameField::X1: {
      const ChartPoint chart(theta, psi);
      const double z = height(ax, chart).z;
      return TangentCoords{0.0, 1.0, 0.0, z * std::sin(phi),
                           -z * std::cos(phi)};
    }
    case FrameField::X2: {
      const ConstraintCoeffs k = constraint_coeffs(ax, phi, theta, psi);
      return TangentCoords{0.0, 0.0, 1.0, k.E, k.F};
    }
    case FrameField::Y1:
    case FrameField::Y2: {
      const ChartPoint chart(theta, psi);
      const ConfigCoords q(phi, chart, 0.0, 0.0);
      const FrameAtPoint f = frame_fields(ax, q);
      return sel == FrameField::Y1 ? f.Y1 : f.Y2;
    }
  }
  throw std::logic_error("frame_field_at: bad selector");
}

TangentCoords lie_bracket(const SemiAxes& ax, FrameField u, FrameField v,
                          const ConfigCoords& q) {
  const double phi = q.phi;
  const double theta = q.chart.theta();
  const double psi = q.chart.psi();
  const double h[3] = {detail::fd_step(phi), detail::fd_step(theta),
                       detail::fd_step(psi)};

  const bool ok =
      phi - 2 * h[0] >= kChartMargin && phi + 2 * h[0] <= kTwoPi - kChartMargin &&
      theta - 2 * h[1] >= kChartMargin &&
      theta + 2 * h[1] <= kPi - kChartMargin &&
      psi - 2 * h[2] >= kChartMargin && psi + 2 * h[2] <= kTwoPi - kChartMargin;
  if (!ok) {
    std::ostringstream os;
    os << "lie_bracket: stencil at (phi, theta, psi) = (" << phi << ", "
       << theta << ", " << psi << ") leaves the valid chart";
    throw ChartMarginViolation(os.str());
  }

  auto eval = [&](FrameField sel, double f, double t, double p) {
    return raw(detail::frame_field_at(ax, sel, f, t, p));
  };

  // Jacobians of the two fields with respect to (phi, theta, psi) by
  // central differences; rows are the 5 components.
  double Ju[5][3], Jv[5][3];
  for (int dir = 0; dir < 3; ++dir) {
    double fp = phi, tp = theta, pp = psi;
    double fm = phi, tm = theta, pm = psi;
    switch (dir) {
      case 0: fp += h[0]; fm -= h[0]; break;
      case 1: tp += h[1]; tm -= h[1]; break;
      case 2: pp += h[2]; pm -= h[2]; break;
    }
    const RawField up = eval(u, fp, tp, pp), um = eval(u, fm, tm, pm);
    const RawField vp = eval(v, fp, tp, pp), vm = eval(v, fm, tm, pm);
    const double inv2h = 0.5 / h[dir];
    for (int k = 0; k < 5; ++k) {
      Ju[k][dir] = (up.c[k] - um.c[k]) * inv2h;
      Jv[k][dir] = (vp.c[k] - vm.c[k]) * inv2h;
    }
  }

  const RawField u0 = eval(u, phi, theta, psi);
  const RawField v0 = eval(v, phi, theta, psi);
  TangentCoords out;
  double* oc[5] = {&out.dphi, &out.dtheta, &out.dpsi, &out.dx, &out.dy};
  for (int k = 0; k < 5; ++k) {
    double s = 0.0;
    for (int dir = 0; dir < 3; ++dir) {
      s += Jv[k][dir] * u0.c[dir] - Ju[k][dir] * v0.c[dir];
    }
    *oc[k] = s;
  }
  return out;
}

double structure_trace_numeric(const SemiAxes& ax, const ChartPoint& chart,
                               double phi_sample) {
  const ConfigCoords q(phi_sample, chart, 0.0, 0.0);
  const TangentCoords b1 = lie_bracket(ax, FrameField::Z, FrameField::X1, q);
  const TangentCoords b2 = lie_bracket(ax, FrameField::Z, FrameField::X2, q);

  const FrameAtPoint frame = frame_fields(ax, q);
  const MetricMatrix5 M = metric_matrix(ax, chart);
  const ProjectionResult p1 = project_D(frame, M, b1);
  const ProjectionResult p2 = project_D(frame, M, b2);
  return p1.coeffs[1] + p2.coeffs[2];
}

double G_fun(const SemiAxes& ax, const ChartPoint& chart) {
  const double a2 = ax.a() * ax.a(), b2 = ax.b() * ax.b(),
               c2 = ax.c() * ax.c();
  const double c2t = std::cos(2.0 * chart.theta());
  const double c2p = std::cos(2.0 * chart.psi());
  return (2.0 * a2 * b2 + 3.0 * a2 * c2 + 3.0 * b2 * c2) +
         (b2 - a2) * c2 * (1.0 - c2t) * c2p +
         (-2.0 * a2 * b2 + a2 * c2 + b2 * c2) * c2t;
}

double trace_closed_form(const SemiAxes& ax, const ChartPoint& chart) {
  const double a2 = ax.a() * ax.a(), b2 = ax.b() * ax.b(),
               c2 = ax.c() * ax.c();
  const double m = ax.m();
  const double st = std::sin(chart.theta()), ct = std::cos(chart.theta());
  const double sp = std::sin(chart.psi()), cp = std::cos(chart.psi());
  const double z = height(ax, chart).z;
  const double detT = gram_T_det(gram_T(ax, chart));
  const double num = 3.0 * m * m * m * st * st * st * st * ct * sp * cp *
                     (a2 - b2) * (b2 - c2) * (c2 - a2) * G_fun(ax, chart);
  return num / (50.0 * detT * z * z * z * z);
}

double default_tol_zero(const SemiAxes& ax) {
  const double r = ax.max_semi_axis();
  const double m3 = ax.m() * ax.m() * ax.m();
  return 1e-8 * m3 * r * r * r * r * r * r;
}

SweepResult sweep_verdict(const SemiAxes& ax, int n_theta, int n_psi,
                          double tol_zero, SweepMode mode, int n_threads) {
  if (n_theta < 8 || n_psi < 8) {
    throw std::invalid_argument("sweep_verdict: grid sizes must be >= 8");
  }
  if (!(tol_zero > 0.0) || !std::isfinite(tol_zero)) {
    throw std::invalid_argument("sweep_verdict: tol_zero must be positive");
  }

  // Midpoint grid of the shrunk chart: cell centers stay clear of the
  // pole-adjacent strip where the frame Gram matrix degenerates.
  const double th_lo = kChartMargin, th_hi = kPi - kChartMargin;
  const double ps_lo = kChartMargin, ps_hi = kTwoPi - kChartMargin;
  const double dth = (th_hi - th_lo) / n_theta;
  const double dps = (ps_hi - ps_lo) / n_psi;

  const double qnan = std::numeric_limits<double>::quiet_NaN();
  SweepResult out;
  out.samples.resize(static_cast<size_t>(n_theta) * n_psi,
                     TraceSample{0.0, 0.0, qnan, qnan});

  const bool want_numeric = mode != SweepMode::ClosedForm;
  const bool want_closed = mode != SweepMode::Numeric;

  auto run_rows = [&](int row_begin, int row_end) {
    for (int i = row_begin; i < row_end; ++i) {
      const double theta = th_lo + (i + 0.5) * dth;
      for (int j = 0; j < n_psi; ++j) {
        const double psi = ps_lo + (j + 0.5) * dps;
        const ChartPoint pt(theta, psi);
        TraceSample& s = out.samples[static_cast<size_t>(i) * n_psi + j];
        s.theta = theta;
        s.psi = psi;
        if (want_numeric) s.numeric = structure_trace_numeric(ax, pt);
        if (want_closed) s.closed_form = trace_closed_form(ax, pt);
      }
    }
  };

  int threads = n_threads > 0
                    ? n_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, n_theta);
  if (threads == 1) {
    run_rows(0, n_theta);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n_theta + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int lo = t * chunk;
      const int hi = std::min(n_theta, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_rows, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Serial reduction in index order: the lowest (i_theta, i_psi) wins
  // ties, so the result does not depend on the thread partition.
  double sup = -1.0;
  size_t arg = 0;
  double max_xcheck = 0.0;
  for (size_t idx = 0; idx < out.samples.size(); ++idx) {
    const TraceSample& s = out.samples[idx];
    const double val = want_numeric ? std::abs(s.numeric)
                                    : std::abs(s.closed_form);
    if (val > sup) {
      sup = val;
      arg = idx;
    }
    if (mode == SweepMode::Both) {
      const double rel = std::abs(s.numeric - s.closed_form) /
                         std::max(1.0, std::abs(s.closed_form));
      max_xcheck = std::max(max_xcheck, rel);
    }
  }

  MeasureVerdict v;
  v.sup_abs_trace = sup;
  v.argmax_chart = ChartPoint(out.samples[arg].theta, out.samples[arg].psi);
  v.necessary_condition_holds = sup <= tol_zero;
  v.n_theta = n_theta;
  v.n_psi = n_psi;
  v.tol_zero = tol_zero;
  v.expected_from_symmetry = ax.symmetry_class() != SymmetryClass::Triaxial;
  out.verdict = v;
  if (mode == SweepMode::Both) out.max_cross_check = max_xcheck;
  return out;
}

}  // namespace ellroll
