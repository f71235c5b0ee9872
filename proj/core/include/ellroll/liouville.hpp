#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ellroll/dynamics.hpp"

namespace ellroll {

/// A positive density gamma -> rho(gamma) to be tested against the
/// reduced flow in the (theta, psi, Omega) chart.
class DensityCandidate {
 public:
  enum class Tag { AxisymmetricClosedForm, Constant, Custom };

  /// The closed-form density for a solid of revolution (a = b),
  ///   rho = (m/5 (a^2+c^2) + m |r|^2)
  ///         sqrt(2/25 m^2 a^2 (a^2+c^2) + m <r, II r>),
  /// taken against the area form of the sphere times Lebesgue dOmega.
  /// The formula is well-defined for any semi-axes; whether it is
  /// invariant for a != b is exactly what the divergence test probes.
  static DensityCandidate closed_form(const SemiAxes& ax);

  static DensityCandidate constant();

  static DensityCandidate custom(std::string name,
                                 std::function<double(const Vec3&)> fn);

  Tag tag() const { return tag_; }
  const std::string& name() const { return name_; }
  double operator()(const Vec3& gamma) const { return fn_(gamma); }

 private:
  DensityCandidate(Tag tag, std::string name,
                   std::function<double(const Vec3&)> fn)
      : tag_(tag), name_(std::move(name)), fn_(std::move(fn)) {}

  Tag tag_;
  std::string name_;
  std::function<double(const Vec3&)> fn_;
};

/// Checked entry point for the closed-form density: rejects semi-axes
/// whose symmetry class is not a = b.
double density_axisymmetric(const SemiAxes& ax, const Vec3& gamma);

/// How the 2-form "d gamma" of the measure is read on the chart.
enum class AreaConvention {
  SphereArea,      ///< area form of S^2: chart factor sin(theta) (default)
  CoordinateForm,  ///< plain dtheta ^ dpsi: chart factor 1
};

/// The reduced vector field written in the five chart coordinates
/// (theta, psi, Omega1, Omega2, Omega3): the sphere rates come from
/// gammadot = gamma x Omega pushed through the spherical chart, and
/// Omegadot from differentiating K = mass_operator(gamma) Omega through
/// the SPD solve.
Vec5 reduced_chart_field(const SemiAxes& ax, const ChartPoint& chart,
                         const Vec3& omega);

/// One divergence evaluation div( rho J f ) at a sample point, by
/// central differences in all five chart directions with per-coordinate
/// step eps^(1/3) max(1, |coordinate|). J is the chart factor of the
/// chosen convention.
struct DivergenceSample {
  double divergence;   ///< div(rho J f) at the sample
  double field_scale;  ///< rho J max(|f|_2, floor), the normalization
  double relative;     ///< |divergence| / field_scale
};

DivergenceSample chart_divergence(
    const SemiAxes& ax, const DensityCandidate& rho, const ChartPoint& chart,
    const Vec3& omega, AreaConvention convention = AreaConvention::SphereArea);

struct DivergenceRecord {
  double theta;
  double psi;
  Vec3 omega;
  double residual;      ///< raw divergence
  double rel_residual;  ///< residual / field scale
};

struct DivergenceReport {
  std::vector<DivergenceRecord> records;
  double max_rel_residual = 0.0;
  double mean_rel_residual = 0.0;
  std::string density_name;
};

/// Sampling box for the divergence protocol: chart points at least
/// theta_margin inside the chart and |Omega| <= omega_max.
struct SampleBox {
  double theta_margin = 0.3;
  double psi_margin = 0.3;
  double omega_max = 2.0;
};

/// Seeded batch of divergence evaluations; deterministic in (seed, n).
DivergenceReport divergence_report(
    const SemiAxes& ax, const DensityCandidate& rho, int n_samples,
    uint64_t seed, const SampleBox& box = {},
    AreaConvention convention = AreaConvention::SphereArea);

/// Along-trajectory form of the same test: the Liouville defect
/// d/dt ln(rho J) + div(f) (equal to div(rho J f) / (rho J)) evaluated
/// at every accepted step, normalized by the field scale.
struct LiouvilleResult {
  double max_defect_rel = 0.0;
  bool truncated = false;  ///< the trajectory left the margin-shrunk chart
  long steps_evaluated = 0;
};

LiouvilleResult liouville_trajectory_test(
    const SemiAxes& ax, const DensityCandidate& rho, const ReducedState& s0,
    double dt, double t_end,
    AreaConvention convention = AreaConvention::SphereArea);

}  // namespace ellroll
