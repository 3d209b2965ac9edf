#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "colmod/core/density_matrix.hpp"
#include "colmod/core/errors.hpp"
#include "colmod/core/layout.hpp"
#include "colmod/core/linalg.hpp"
#include "colmod/core/types.hpp"

namespace colmod {

// All entropies are in nats.

/// -sum p ln p over a density-matrix spectrum. Eigenvalues in [-1e-10, 0) are
/// roundoff and clipped to 0; anything more negative is rejected.
inline double entropy_of_spectrum(const Spectrum& spectrum) {
  double s = 0.0;
  for (double p : spectrum.eigenvalues) {
    if (p < -tol::kNegativeEigenvalue) {
      throw ValidationError("entropy: negative eigenvalue " + std::to_string(p));
    }
    p = std::clamp(p, 0.0, 1.0);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_of_spectrum(hermitian_spectrum(rho.op()));
}

/// Consumes the operator so the eigensolve can run in place.
inline double von_neumann_entropy(DensityMatrix&& rho) {
  return entropy_of_spectrum(hermitian_spectrum(std::move(rho).release()));
}

/// H2(x) = -x ln x - (1-x) ln(1-x).
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary_entropy: argument outside [0,1]");
  if (x < 1e-15 || x > 1.0 - 1e-15) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

namespace detail {

/// ln(sigma) restricted to its support, plus the support projector defect.
struct LogOnSupport {
  Operator log;
  Operator kernel_projector;
};

inline LogOnSupport log_on_support(const Operator& sigma) {
  const Eigen::Index n = sigma.rows();
  if (sigma.isDiagonal(0.0)) {
    LogOnSupport out{Operator::Zero(n, n), Operator::Zero(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = sigma(i, i).real();
      if (p > tol::kSupport) {
        out.log(i, i) = std::log(p);
      } else {
        out.kernel_projector(i, i) = 1.0;
      }
    }
    return out;
  }
  const Eigensystem es = hermitian_eigensystem(sigma);
  Eigen::VectorXcd logs = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd kernel = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = es.values(i);
    if (p > tol::kSupport) {
      logs(i) = std::log(p);
    } else {
      kernel(i) = 1.0;
    }
  }
  return {es.vectors * logs.asDiagonal() * es.vectors.adjoint(),
          es.vectors * kernel.asDiagonal() * es.vectors.adjoint()};
}

}  // namespace detail

/// -Tr[rho ln sigma]; +infinity when rho has weight outside the support of sigma.
inline double cross_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative_entropy: dimension mismatch");
  const auto ls = detail::log_on_support(sigma.op());
  const double leak = (ls.kernel_projector.cwiseProduct(rho.op().transpose())).sum().real();
  if (leak > tol::kSupport) return std::numeric_limits<double>::infinity();
  return -(ls.log.cwiseProduct(rho.op().transpose())).sum().real();
}

/// S(rho||sigma) = Tr[rho (ln rho - ln sigma)].
/// Returns +infinity (std::isinf) when supp(rho) is not contained in supp(sigma).
/// `rho_entropy` may carry an already computed S(rho) to skip a second eigensolve.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                               std::optional<double> rho_entropy = std::nullopt) {
  const double cross = cross_entropy(rho, sigma);
  if (std::isinf(cross)) return cross;
  const double s = rho_entropy ? *rho_entropy : von_neumann_entropy(rho);
  return cross - s;
}

/// I(A:B) = S_A + S_B - S_AB across the cut `side_a` | rest.
/// Returned raw; tiny negative values are roundoff.
inline double mutual_information(const DensityMatrix& rho_ab, const TensorLayout& layout,
                                 const std::vector<FactorLabel>& side_a) {
  for (const auto& l : side_a) layout.position_of(l);
  const auto side_b = layout.complement(side_a);
  if (side_a.empty() || side_b.empty()) {
    throw LabelError("mutual_information: both sides of the cut must be nonempty");
  }
  const double s_a = von_neumann_entropy(partial_trace(rho_ab, layout, side_a));
  const double s_b = von_neumann_entropy(partial_trace(rho_ab, layout, side_b));
  const double s_ab = von_neumann_entropy(rho_ab);
  return s_a + s_b - s_ab;
}

}  // namespace colmod
