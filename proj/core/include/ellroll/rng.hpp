#pragma once

#include <cstdint>
#include <random>

#include "ellroll/geometry.hpp"

namespace ellroll {

/// Deterministic uniform sampling on top of mt19937_64. The standard
/// fixes the engine's output exactly, while <random> distributions are
/// implementation-defined; mapping the raw 64-bit words ourselves keeps
/// every seeded run byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on the unit sphere (area measure).
  Vec3 unit_vector() {
    const double z = uniform(-1.0, 1.0);
    const double az = uniform(0.0, 2.0 * 3.14159265358979323846);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3(rho * std::cos(az), rho * std::sin(az), z);
  }

  /// Uniform in the solid ball of the given radius (rejection from the
  /// bounding cube).
  Vec3 in_ball(double radius) {
    for (;;) {
      const Vec3 v(uniform(-1.0, 1.0), uniform(-1.0, 1.0),
                   uniform(-1.0, 1.0));
      if (v.squaredNorm() <= 1.0) return radius * v;
    }
  }

  uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ellroll
