#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "colmod/core/errors.hpp"
#include "colmod/core/linalg.hpp"
#include "colmod/core/types.hpp"

namespace colmod {

/// How much of the density-matrix contract to verify on construction.
/// kFull adds an eigensolve for positivity; kStructural checks Hermiticity and
/// trace only and is used for states produced by unitary evolution.
enum class Check { kFull, kStructural };

/// Positive, unit-trace Hermitian operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator op, Check check = Check::kFull) : op_(std::move(op)) {
    detail::require_square(op_, "DensityMatrix");
    if (op_.rows() == 0) throw DimensionError("DensityMatrix: empty operator");
    const double dev = hermitian_deviation(op_);
    if (dev > tol::kDensityHermitian) {
      throw ValidationError("DensityMatrix: not Hermitian (deviation " + std::to_string(dev) + ")");
    }
    const Complex tr = op_.trace();
    if (std::abs(tr - Complex(1.0)) > tol::kUnitTrace) {
      throw ValidationError("DensityMatrix: trace " + std::to_string(tr.real()) + " is not 1");
    }
    if (check == Check::kFull) {
      const Spectrum s = hermitian_spectrum(op_);
      if (s.min() < -tol::kNegativeEigenvalue) {
        throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(s.min()));
      }
    }
  }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    return DensityMatrix(identity(dim) / static_cast<double>(dim), Check::kStructural);
  }

  /// |k><k| in the computational basis.
  static DensityMatrix basis_state(std::size_t dim, std::size_t k) {
    Operator op = Operator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    op(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    return DensityMatrix(std::move(op), Check::kStructural);
  }

  const Operator& op() const noexcept { return op_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(op_.rows()); }
  Operator release() && { return std::move(op_); }

 private:
  Operator op_;
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(tensor(a.op(), b.op()), Check::kStructural);
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const TensorLayout& layout,
                                   const std::vector<FactorLabel>& keep) {
  Operator reduced = partial_trace(rho.op(), layout, keep);
  symmetrize_in_place(reduced);
  return DensityMatrix(std::move(reduced), Check::kStructural);
}

/// Trace distance ||a - b||_1 (without the conventional 1/2).
inline double trace_norm_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace_norm_distance: dimension mismatch");
  return trace_norm(Operator(a.op() - b.op()));
}

}  // namespace colmod
