#pragma once

#include <cmath>
#include <limits>

#include "colmod/core/density_matrix.hpp"
#include "colmod/core/errors.hpp"
#include "colmod/core/states.hpp"

namespace colmod {

/// Qubit state rho = (I + r.sigma)/2.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }

  friend BlochVector operator+(BlochVector a, BlochVector b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend BlochVector operator-(BlochVector a, BlochVector b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend BlochVector operator*(double k, BlochVector a) { return {k * a.x, k * a.y, k * a.z}; }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline double distance(BlochVector a, BlochVector b) { return (a - b).norm(); }

inline BlochVector bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionError("bloch_from_density: qubit state required");
  const Operator& m = rho.op();
  return {2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

inline DensityMatrix density_from_bloch(BlochVector r) {
  if (r.norm() > 1.0 + 1e-12) throw DomainError("density_from_bloch: |r| > 1");
  Operator m(2, 2);
  m << Complex(0.5 * (1.0 + r.z), 0.0), Complex(0.5 * r.x, -0.5 * r.y),
      Complex(0.5 * r.x, 0.5 * r.y), Complex(0.5 * (1.0 - r.z), 0.0);
  return DensityMatrix(std::move(m), Check::kStructural);
}

/// z-component s(beta) = -tanh(beta/2) of the Gibbs state of sigma_z/2; -1 at beta = inf.
inline double gibbs_bloch_z(double beta) {
  if (beta < 0.0 || std::isnan(beta)) throw DomainError("gibbs_bloch_z: beta must be >= 0");
  return std::isinf(beta) ? -1.0 : -std::tanh(0.5 * beta);
}

}  // namespace colmod
