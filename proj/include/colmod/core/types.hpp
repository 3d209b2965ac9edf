#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace colmod {

using Complex = std::complex<double>;

/// Dense square complex matrix; the generic operator type of the library.
using Operator = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances shared across modules.
namespace tol {
inline constexpr double kDensityHermitian = 1e-12;
inline constexpr double kInputHermitian = 1e-10;
inline constexpr double kUnitTrace = 1e-10;
/// Eigenvalues in [-kNegativeEigenvalue, 0) are roundoff and clipped to zero.
inline constexpr double kNegativeEigenvalue = 1e-10;
inline constexpr double kSupport = 1e-12;
inline constexpr double kInequalitySlack = 1e-8;
inline constexpr double kIdentity = 1e-8;
inline constexpr double kMutualInfoAgreement = 1e-6;
}  // namespace tol

inline Operator identity(std::size_t dim) {
  return Operator::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

inline std::size_t dim_of(const Operator& op) { return static_cast<std::size_t>(op.rows()); }

/// Largest entrywise deviation |a - a^dagger|.
inline double hermitian_deviation(const Operator& a) {
  double worst = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c; r < n; ++r) {
      worst = std::max(worst, std::abs(a(r, c) - std::conj(a(c, r))));
    }
  }
  return worst;
}

/// Replaces a by (a + a^dagger)/2 without a temporary.
inline void symmetrize_in_place(Operator& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    a(c, c) = Complex(a(c, c).real(), 0.0);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const Complex avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = avg;
      a(c, r) = std::conj(avg);
    }
  }
}

}  // namespace colmod
