#pragma once

#include <stdexcept>
#include <string>

namespace ellroll {

/// A matrix that must be positive definite failed its Cholesky
/// factorization. For the Gram matrix of the constraint frame this
/// indicates either a bug or an input at the chart boundary.
class NonPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite-difference stencil (or any evaluation that needs room around
/// its base point) would leave the valid chart.
class ChartMarginViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Poisson vector is too close to the singular set of the spherical
/// chart (the poles theta in {0, pi} or the psi branch cut).
class PoleProximity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state component left the finite floating-point range.
class NonFinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ellroll
