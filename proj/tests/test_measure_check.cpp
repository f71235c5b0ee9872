#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ellroll/measure_check.hpp"
#include "ellroll/rng.hpp"
#include "test_support.hpp"

using namespace ellroll;

TEST_SUITE_BEGIN("measure-check");

TEST_CASE("bracket of a field with itself vanishes") {
  const SemiAxes ax = ts::triaxial();
  const ConfigCoords q(1.3, ChartPoint(1.1, 2.4), 0, 0);
  for (FrameField f : {FrameField::Z, FrameField::X1, FrameField::Y2}) {
    const TangentCoords b = lie_bracket(ax, f, f, q);
    CHECK(b.vec().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("bracket antisymmetry") {
  const SemiAxes ax = ts::near_round();
  Rng rng(61);
  const FrameField all[5] = {FrameField::Z, FrameField::X1, FrameField::X2,
                             FrameField::Y1, FrameField::Y2};
  for (int i = 0; i < 20; ++i) {
    const ConfigCoords q(rng.uniform(0.3, 6.0), ts::random_chart(rng), 0, 0);
    for (int u = 0; u < 5; ++u) {
      for (int v = u + 1; v < 5; ++v) {
        const Vec5 buv = lie_bracket(ax, all[u], all[v], q).vec();
        const Vec5 bvu = lie_bracket(ax, all[v], all[u], q).vec();
        CHECK((buv + bvu).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("[Z, X1] matches its closed form") {
  // [Z, X1] = (z cos(phi) - dA/dth) d/dx + (z sin(phi) - dB/dth) d/dy,
  // with the theta-derivatives of A, B differentiated by hand.
  const SemiAxes ax = ts::triaxial();
  Rng rng(67);
  for (int i = 0; i < 100; ++i) {
    const double phi = rng.uniform(0.3, 6.0);
    const ChartPoint chart = ts::random_chart(rng);
    const ConfigCoords q(phi, chart, 0, 0);
    const TangentCoords b = lie_bracket(ax, FrameField::Z, FrameField::X1, q);
    CHECK(b.dphi == 0.0);
    CHECK(b.dtheta == 0.0);
    CHECK(b.dpsi == 0.0);
    const double z = height(ax, chart).z;
    const double ex =
        z * std::cos(phi) - ts::dA_dtheta(ax, phi, chart.theta(), chart.psi());
    const double ey =
        z * std::sin(phi) - ts::dB_dtheta(ax, phi, chart.theta(), chart.psi());
    CHECK(std::abs(b.dx - ex) < 1e-7);
    CHECK(std::abs(b.dy - ey) < 1e-7);
  }
}

TEST_CASE("[X1, X2] projects consistently across the group direction") {
  const SemiAxes ax = ts::triaxial();
  Rng rng(71);
  for (int i = 0; i < 30; ++i) {
    const ChartPoint chart = ts::random_chart(rng);
    Vec3 coeffs[2];
    int k = 0;
    for (double phi : {0.7, 2.1}) {
      const ConfigCoords q(phi, chart, 0, 0);
      const TangentCoords b =
          lie_bracket(ax, FrameField::X1, FrameField::X2, q);
      coeffs[k++] = project_D(ax, q, b).coeffs;
    }
    CHECK((coeffs[0] - coeffs[1]).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("bracket margin enforcement") {
  const SemiAxes ax = ts::triaxial();
  const double h = detail::fd_step(kChartMargin);
  const ConfigCoords q(1.0, ChartPoint(kChartMargin + h, 1.0), 0, 0);
  CHECK_THROWS_AS(lie_bracket(ax, FrameField::Z, FrameField::X1, q),
                  ChartMarginViolation);
  const ConfigCoords q2(kChartMargin + h, ChartPoint(1.0, 1.0), 0, 0);
  CHECK_THROWS_AS(lie_bracket(ax, FrameField::Z, FrameField::X1, q2),
                  ChartMarginViolation);
}

TEST_CASE("numeric trace vanishes for bodies of revolution") {
  Rng rng(73);
  for (const SemiAxes& ax :
       {ts::axi_ab(), ts::axi_bc(), SemiAxes(2, 1, 1, 1), ts::sphere()}) {
    for (int i = 0; i < 25; ++i) {
      const ChartPoint chart = ts::random_chart(rng);
      CHECK(std::abs(structure_trace_numeric(ax, chart)) < 1e-8);
    }
  }
}

TEST_CASE("numeric trace vanishes on the equator for a tri-axial body") {
  const SemiAxes ax = ts::triaxial();
  for (double ps : {0.4, 1.3, 2.9, 5.1}) {
    CHECK(std::abs(structure_trace_numeric(ax, ChartPoint(ts::kPi / 2, ps))) <
          1e-8);
  }
}

TEST_CASE("numeric trace is independent of the sampled phi") {
  const SemiAxes ax = ts::triaxial();
  const double phis[8] = {0.4, 1.2, 2.0, 2.8, 3.6, 4.4, 5.2, 6.0};
  for (const ChartPoint& chart :
       {ChartPoint(ts::kPi / 3, ts::kPi / 6), ChartPoint(0.7, 2.2),
        ChartPoint(2.3, 4.0)}) {
    double lo = 1e300, hi = -1e300;
    for (double phi : phis) {
      const double v = structure_trace_numeric(ax, chart, phi);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi - lo < 1e-9);
  }
}

TEST_CASE("numeric trace against the closed form") {
  Rng rng(79);
  const SemiAxes cases[5] = {ts::sphere(), ts::axi_ab(), ts::axi_bc(),
                             ts::triaxial(), ts::near_round()};
  for (const SemiAxes& ax : cases) {
    for (int i = 0; i < 40; ++i) {
      const ChartPoint chart = ts::random_chart(rng);
      const double num = structure_trace_numeric(ax, chart);
      const double closed = trace_closed_form(ax, chart);
      CHECK(std::abs(num - closed) <= 1e-6 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST_CASE("sign structure of the trace follows its trigonometric prefactor") {
  const SemiAxes ax = ts::triaxial();
  Rng rng(83);
  for (int i = 0; i < 25; ++i) {
    const double th = rng.uniform(0.3, ts::kPi / 2 - 0.2);
    const double ps = rng.uniform(0.3, ts::kPi / 2 - 0.2);
    const double v = structure_trace_numeric(ax, ChartPoint(th, ps));
    // odd under theta -> pi - theta (cos factor) and psi -> pi - psi
    // (cos psi factor)
    const double v_th = structure_trace_numeric(ax, ChartPoint(ts::kPi - th, ps));
    const double v_ps = structure_trace_numeric(ax, ChartPoint(th, ts::kPi - ps));
    CHECK(std::abs(v + v_th) < 1e-8);
    CHECK(std::abs(v + v_ps) < 1e-8);
    // and the sign agrees with the closed form where it is not tiny
    const double closed = trace_closed_form(ax, ChartPoint(th, ps));
    if (std::abs(closed) > 1e-3) {
      CHECK(v * closed > 0.0);
    }
  }
}

TEST_CASE("G function values") {
  const double R = 1.3, R4 = R * R * R * R;
  const SemiAxes sp(R, R, R, 1);
  Rng rng(89);
  for (int i = 0; i < 30; ++i) {
    CHECK(G_fun(sp, ts::random_chart(rng)) ==
          doctest::Approx(8.0 * R4).epsilon(1e-14));
  }

  // a = b: the cos(2 psi) summand carries the vanishing factor b^2 - a^2
  const SemiAxes ab(1.2, 1.2, 0.7, 1);
  const double a2 = 1.44, c2 = 0.49;
  for (int i = 0; i < 30; ++i) {
    const ChartPoint chart = ts::random_chart(rng);
    const double expected = (2 * a2 * a2 + 6 * a2 * c2) +
                            (-2 * a2 * a2 + 2 * a2 * c2) *
                                std::cos(2 * chart.theta());
    CHECK(G_fun(ab, chart) == doctest::Approx(expected).epsilon(1e-14));
  }

  // hand-substituted corner: cos 2th = cos 2ps = -1 gives 4 a^2 (b^2+c^2)
  CHECK(G_fun(ts::triaxial(), ChartPoint(ts::kPi / 2, ts::kPi / 2)) ==
        doctest::Approx(52.0).epsilon(1e-13));
}

TEST_CASE("closed form: exact zeros") {
  Rng rng(97);
  // any axisymmetric body: a polynomial factor is exactly zero
  for (const SemiAxes& ax : {ts::axi_ab(), ts::axi_bc(), SemiAxes(3, 1, 3, 2)}) {
    for (int i = 0; i < 20; ++i) {
      CHECK(trace_closed_form(ax, ts::random_chart(rng)) == 0.0);
    }
  }
  // psi = pi/2: the cos(psi) factor is zero up to the rounding of pi/2
  const SemiAxes tri = ts::triaxial();
  for (double th : {0.5, 1.2, 2.2}) {
    CHECK(std::abs(trace_closed_form(tri, ChartPoint(th, ts::kPi / 2))) <
          1e-14);
  }
}

TEST_CASE("sweep verdicts reproduce the symmetry dichotomy") {
  for (const SemiAxes& ax :
       {ts::axi_ab(), ts::axi_bc(), SemiAxes(2, 1, 2, 1), ts::sphere()}) {
    const SweepResult r =
        sweep_verdict(ax, 64, 64, default_tol_zero(ax), SweepMode::Numeric);
    CHECK(r.verdict.necessary_condition_holds);
    CHECK(r.verdict.expected_from_symmetry);
  }
  for (const SemiAxes& ax : {ts::triaxial(), ts::near_round()}) {
    const SweepResult r =
        sweep_verdict(ax, 64, 64, default_tol_zero(ax), SweepMode::Numeric);
    CHECK_FALSE(r.verdict.necessary_condition_holds);
    CHECK_FALSE(r.verdict.expected_from_symmetry);
    CHECK(r.verdict.sup_abs_trace > 10.0 * r.verdict.tol_zero);
  }
}

TEST_CASE("sweep: modes, cross-check, determinism across threads") {
  const SemiAxes ax = ts::triaxial();
  const double tol = default_tol_zero(ax);

  const SweepResult both = sweep_verdict(ax, 16, 16, tol, SweepMode::Both, 1);
  REQUIRE(both.max_cross_check.has_value());
  CHECK(*both.max_cross_check < 1e-6);

  const SweepResult numeric =
      sweep_verdict(ax, 16, 16, tol, SweepMode::Numeric, 1);
  CHECK_FALSE(numeric.max_cross_check.has_value());
  CHECK(std::isnan(numeric.samples.front().closed_form));
  CHECK_FALSE(std::isnan(numeric.samples.front().numeric));

  const SweepResult closed =
      sweep_verdict(ax, 16, 16, tol, SweepMode::ClosedForm, 1);
  CHECK(std::isnan(closed.samples.front().numeric));

  // a multi-thread run must be bitwise identical to the serial one
  const SweepResult mt = sweep_verdict(ax, 16, 16, tol, SweepMode::Both, 4);
  REQUIRE(mt.samples.size() == both.samples.size());
  CHECK(std::memcmp(mt.samples.data(), both.samples.data(),
                    mt.samples.size() * sizeof(TraceSample)) == 0);
  CHECK(mt.verdict.sup_abs_trace == both.verdict.sup_abs_trace);
  CHECK(mt.verdict.argmax_chart.theta() == both.verdict.argmax_chart.theta());
  CHECK(mt.verdict.argmax_chart.psi() == both.verdict.argmax_chart.psi());

  CHECK_THROWS_AS(sweep_verdict(ax, 4, 64, tol, SweepMode::Numeric),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_verdict(ax, 64, 64, -1.0, SweepMode::Numeric),
                  std::invalid_argument);
}

TEST_CASE("default verdict threshold scales with mass and size") {
  CHECK(default_tol_zero(SemiAxes(1, 1, 1, 1)) ==
        doctest::Approx(1e-8).epsilon(1e-12));
  CHECK(default_tol_zero(SemiAxes(1, 2, 3, 1)) ==
        doctest::Approx(1e-8 * 729.0).epsilon(1e-12));
  CHECK(default_tol_zero(SemiAxes(1, 1, 1, 2)) ==
        doctest::Approx(8e-8).epsilon(1e-12));
}

TEST_SUITE_END();
