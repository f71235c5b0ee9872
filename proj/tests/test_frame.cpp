#include <doctest.h>

#include <cmath>

#include "ellroll/frame.hpp"
#include "ellroll/rng.hpp"
#include "test_support.hpp"

using namespace ellroll;

namespace {

ConfigCoords rand_config(Rng& rng) {
  return ConfigCoords(rng.uniform(0.2, 6.0), ts::random_chart(rng),
                      rng.uniform(-1, 1), rng.uniform(-1, 1));
}

}  // namespace

TEST_SUITE_BEGIN("frame");

TEST_CASE("frame fields: definitions and orthogonalization") {
  const SemiAxes ax = ts::triaxial();
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const ConfigCoords q = rand_config(rng);
    const FrameAtPoint f = frame_fields(ax, q);
    const MetricMatrix5 M = metric_matrix(ax, q.chart);
    const double z = height(ax, q.chart).z;
    const ConstraintCoeffs k =
        constraint_coeffs(ax, q.phi, q.chart.theta(), q.chart.psi());

    CHECK(f.Z.dphi == 1.0);
    CHECK(f.Z.dx == k.A);
    CHECK(f.Z.dy == k.B);
    CHECK(f.X1.dx == z * std::sin(q.phi));
    CHECK(f.X1.dy == -z * std::cos(q.phi));
    CHECK(f.X2.dx == k.E);
    CHECK(f.X2.dy == k.F);

    // G(Z, Y_alpha) = 0 is the Gram-Schmidt step
    CHECK(std::abs(inner(M, f.Z, f.Y1)) < 1e-12);
    CHECK(std::abs(inner(M, f.Z, f.Y2)) < 1e-12);
  }

  // sphere: Z = d/dphi, so mu_alpha = G(dphi, X_alpha)/G(dphi, dphi)
  const SemiAxes sp(1.4, 1.4, 1.4, 1.0);
  for (int i = 0; i < 20; ++i) {
    const ConfigCoords q = rand_config(rng);
    const FrameAtPoint f = frame_fields(sp, q);
    CHECK(std::abs(f.Z.dx) < 1e-13);
    CHECK(std::abs(f.Z.dy) < 1e-13);
    const MetricMatrix5 M = metric_matrix(sp, q.chart);
    TangentCoords dphi{1, 0, 0, 0, 0};
    const double mu1 = inner(M, dphi, f.X1) / inner(M, dphi, dphi);
    const double mu2 = inner(M, dphi, f.X2) / inner(M, dphi, dphi);
    CHECK(f.mu1 == doctest::Approx(mu1).epsilon(1e-10));
    CHECK(f.mu2 == doctest::Approx(mu2).epsilon(1e-10));
  }
}

TEST_CASE("verticality and pushforwards") {
  const SemiAxes ax = ts::near_round();
  Rng rng(43);
  for (int i = 0; i < 50; ++i) {
    const FrameAtPoint f = frame_fields(ax, rand_config(rng));
    // Z projects to zero on the shape chart; X_alpha push forward to the
    // coordinate fields, literally.
    CHECK(f.Z.dtheta == 0.0);
    CHECK(f.Z.dpsi == 0.0);
    CHECK(f.X1.dtheta == 1.0);
    CHECK(f.X1.dpsi == 0.0);
    CHECK(f.X2.dtheta == 0.0);
    CHECK(f.X2.dpsi == 1.0);
    // same for the orthogonalized fields
    CHECK(f.Y1.dtheta == 1.0);
    CHECK(f.Y1.dpsi == 0.0);
    CHECK(f.Y2.dtheta == 0.0);
    CHECK(f.Y2.dpsi == 1.0);
  }
}

TEST_CASE("dimension assumption: (Z, X1, X2, dx, dy) spans everything") {
  const SemiAxes ax = ts::triaxial();
  Rng rng(47);
  for (int i = 0; i < 50; ++i) {
    const FrameAtPoint f = frame_fields(ax, rand_config(rng));
    Mat5 span;
    span.col(0) = f.Z.vec();
    span.col(1) = f.X1.vec();
    span.col(2) = f.X2.vec();
    span.col(3) = TangentCoords{0, 0, 0, 1, 0}.vec();
    span.col(4) = TangentCoords{0, 0, 0, 0, 1}.vec();
    CHECK(std::abs(span.determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("gram matrix: positive definite on a grid, phi independent") {
  const SemiAxes ax = ts::triaxial();
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double th = kChartMargin +
                        (i + 0.5) * (ts::kPi - 2 * kChartMargin) / n;
      const double ps = kChartMargin +
                        (j + 0.5) * (ts::kTwoPi - 2 * kChartMargin) / n;
      const GramT T = gram_T(ax, ChartPoint(th, ps));
      REQUIRE(gram_T_det(T) > 0.0);
    }
  }

  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    const ChartPoint chart = ts::random_chart(rng);
    const GramT Ta = gram_T(ax, chart, 0.3);
    const GramT Tb = gram_T(ax, chart, 2.9);
    CHECK((Ta - Tb).cwiseAbs().maxCoeff() <= 1e-12 * Ta.norm());
  }
}

TEST_CASE("gram matrix: sphere equator value") {
  const double R = 1.0, m = 1.0;
  const SemiAxes sp(R, R, R, m);
  const ChartPoint eq(ts::kPi / 2, 1.1);
  const GramT T = gram_T(sp, eq);
  // Z = dphi there, so T11 = <II gamma, gamma> = 2 m R^2 / 5
  CHECK(T(0, 0) == doctest::Approx(2.0 * m * R * R / 5.0).epsilon(1e-13));
  CHECK(gram_T_det(T) > 0.0);
}

TEST_CASE("projection: members of D, linearity, residual orthogonality") {
  const SemiAxes ax = ts::triaxial();
  Rng rng(59);
  for (int i = 0; i < 100; ++i) {
    const ConfigCoords q = rand_config(rng);
    const FrameAtPoint f = frame_fields(ax, q);

    const ProjectionResult pz = project_D(ax, q, f.Z);
    CHECK((pz.coeffs - Vec3(1, 0, 0)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pz.projection.vec() - f.Z.vec()).cwiseAbs().maxCoeff() < 1e-12);

    const TangentCoords combo =
        TangentCoords::from_vec(2.0 * f.Z.vec() - f.X2.vec());
    const ProjectionResult pc = project_D(ax, q, combo);
    CHECK((pc.coeffs - Vec3(2, 0, -1)).cwiseAbs().maxCoeff() < 1e-10);

    // residual of d/dx is metric-orthogonal to the whole frame
    const TangentCoords ddx{0, 0, 0, 1, 0};
    const ProjectionResult px = project_D(ax, q, ddx);
    const TangentCoords res =
        TangentCoords::from_vec(ddx.vec() - px.projection.vec());
    const MetricMatrix5 M = metric_matrix(ax, q.chart);
    CHECK(std::abs(inner(M, res, f.Z)) < 1e-10);
    CHECK(std::abs(inner(M, res, f.X1)) < 1e-10);
    CHECK(std::abs(inner(M, res, f.X2)) < 1e-10);

    // idempotence
    const ProjectionResult pp = project_D(ax, q, px.projection);
    CHECK((pp.projection.vec() - px.projection.vec()).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_SUITE_END();
