#pragma once

#include <optional>
#include <vector>

#include "ellroll/frame.hpp"

namespace ellroll {

// The reduction scheme behind this module needs two facts about the
// shape sphere S^2: its first de Rham cohomology is trivial, and the
// spherical chart (theta, psi) covers it up to a measure-zero set. Both
// are classical; the sweep works on the open chart and the vanishing
// criterion extends to all of S^2 by continuity.

/// Selects one of the five invariant frame fields for bracket
/// evaluation.
enum class FrameField { Z, X1, X2, Y1, Y2 };

/// Standard commutator [u, v] = Dv u - Du v of two frame fields at q.
/// The Jacobians with respect to (phi, theta, psi) are central
/// differences with per-direction step h = eps^(1/3) max(1, |angle|);
/// the field components do not depend on x, y, so those directions are
/// skipped. Accurate to O(h^2). Throws ChartMarginViolation if any
/// stencil point would leave the valid chart (margin 2h).
TangentCoords lie_bracket(const SemiAxes& ax, FrameField u, FrameField v,
                          const ConfigCoords& q);

/// The structure-coefficient trace C^1_{1,1} + C^2_{1,2}: the
/// X1-component of the projection of [Z, X1] plus the X2-component of
/// the projection of [Z, X2], both expanded in the (Z, X1, X2) basis.
/// SE(2) invariance makes the result independent of phi_sample.
double structure_trace_numeric(const SemiAxes& ax, const ChartPoint& chart,
                               double phi_sample = kReferencePhi);

/// The polynomial factor
///   G = (2a^2 b^2 + 3a^2 c^2 + 3b^2 c^2)
///       + (b^2 - a^2) c^2 (1 - cos 2th) cos 2ps
///       + (-2a^2 b^2 + a^2 c^2 + b^2 c^2) cos 2th.
double G_fun(const SemiAxes& ax, const ChartPoint& chart);

/// Closed form of the same trace,
///   3 m^3 sin^4(th) cos(th) sin(ps) cos(ps)
///     (a^2-b^2)(b^2-c^2)(c^2-a^2) G(th, ps) / (50 det(T) z^4),
/// evaluated with gram_T's determinant and height's z.
double trace_closed_form(const SemiAxes& ax, const ChartPoint& chart);

/// Scale-aware default threshold under which the trace counts as zero:
/// 1e-8 * m^3 * max(a,b,c)^6.
double default_tol_zero(const SemiAxes& ax);

enum class SweepMode { Numeric, ClosedForm, Both };

/// One grid record of the sweep. Values not requested by the mode are
/// quiet NaN.
struct TraceSample {
  double theta;
  double psi;
  double numeric;
  double closed_form;
};

/// Outcome of the grid sweep of the necessary condition: the trace must
/// vanish identically for an invariant measure to exist.
struct MeasureVerdict {
  double sup_abs_trace = 0.0;
  ChartPoint argmax_chart{1.0, 1.0};
  bool necessary_condition_holds = false;
  int n_theta = 0;
  int n_psi = 0;
  double tol_zero = 0.0;
  /// What the symmetry class predicts (the condition holds iff at least
  /// two semi-axes are equal); carried for comparison on degenerate
  /// inputs, populated for every input.
  bool expected_from_symmetry = false;
};

struct SweepResult {
  MeasureVerdict verdict;
  std::vector<TraceSample> samples;  ///< row-major, theta outer, psi inner
  /// mode == Both only: max over the grid of
  /// |numeric - closed| / max(1, |closed|).
  std::optional<double> max_cross_check;
};

/// Evaluates |trace| on an n_theta x n_psi midpoint grid of the shrunk
/// chart and reports the sup, its argmax (lowest (i_theta, i_psi) on
/// ties) and the verdict sup <= tol_zero. In Numeric/Both mode the
/// verdict is based on the numeric pipeline; in ClosedForm mode on the
/// closed form. Grid sizes must be >= 8. The sweep may run on several
/// threads; results are bitwise independent of the thread count.
SweepResult sweep_verdict(const SemiAxes& ax, int n_theta, int n_psi,
                          double tol_zero, SweepMode mode, int n_threads = 0);

namespace detail {

/// Components of a frame field at (phi, theta, psi); no chart
/// validation, used inside difference stencils.
TangentCoords frame_field_at(const SemiAxes& ax, FrameField sel, double phi,
                             double theta, double psi);

/// Central-difference step for one angle coordinate.
double fd_step(double angle);

}  // namespace detail

}  // namespace ellroll
