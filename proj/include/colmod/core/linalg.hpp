#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "colmod/core/errors.hpp"
#include "colmod/core/layout.hpp"
#include "colmod/core/types.hpp"

namespace colmod {

/// Real eigenvalues of a Hermitian operator, in descending order.
struct Spectrum {
  std::vector<double> eigenvalues;

  double sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }
  double min() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Eigenvalues (ascending, as returned by Eigen) with orthonormal eigenvectors as columns.
struct Eigensystem {
  RealVector values;
  Operator vectors;
};

namespace detail {

/// Partitions the basis into connected components of the exact-nonzero
/// pattern of m. Off-component entries are exactly zero, so the spectrum of m
/// is the union of the component spectra.
inline std::vector<std::vector<Eigen::Index>> nonzero_components(const Operator& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (m(r, c) != Complex(0.0) || m(c, r) != Complex(0.0)) {
        const auto a = find(r);
        const auto b = find(c);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return groups;
}

/// Eigenvalues of a Hermitian matrix, destroying its lower triangle.
/// Householder tridiagonalization runs in place so large matrices are never copied.
inline RealVector dense_eigenvalues_inplace(Operator& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return RealVector::Constant(1, m(0, 0).real());
  double scale = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c; r < n; ++r) scale = std::max(scale, std::abs(m(r, c)));
  }
  if (scale == 0.0) return RealVector::Zero(n);
  m.triangularView<Eigen::Lower>() /= Complex(scale);
  RealVector diag(n);
  RealVector subdiag(n - 1);
  Eigen::VectorXcd hcoeffs(n - 1);
  Eigen::internal::tridiagonalization_inplace(m, diag, subdiag, hcoeffs, false);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  tri.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
  if (tri.info() != Eigen::Success) throw Error("tridiagonal QR failed to converge");
  return tri.eigenvalues() * scale;
}

inline Spectrum eigenvalues_by_blocks(Operator&& m) {
  const auto groups = nonzero_components(m);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m.rows()));
  if (groups.size() == 1) {
    const RealVector ev = dense_eigenvalues_inplace(m);
    values.assign(ev.data(), ev.data() + ev.size());
  } else {
    for (const auto& g : groups) {
      const auto k = static_cast<Eigen::Index>(g.size());
      if (k == 1) {
        values.push_back(m(g[0], g[0]).real());
        continue;
      }
      Operator block(k, k);
      for (Eigen::Index c = 0; c < k; ++c) {
        for (Eigen::Index r = 0; r < k; ++r) block(r, c) = m(g[r], g[c]);
      }
      const RealVector ev = dense_eigenvalues_inplace(block);
      values.insert(values.end(), ev.data(), ev.data() + ev.size());
    }
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return Spectrum{std::move(values)};
}

inline void require_square(const Operator& a, const char* what) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(what) + ": operator is not square");
}

inline void require_hermitian(const Operator& h, const char* what) {
  require_square(h, what);
  const double dev = hermitian_deviation(h);
  if (dev > tol::kInputHermitian) {
    throw ValidationError(std::string(what) + ": input is not Hermitian (deviation " +
                          std::to_string(dev) + ")");
  }
}

}  // namespace detail

/// Kronecker product; a's indices vary slowest.
inline Operator tensor(const Operator& a, const Operator& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Operator tensor_power(const Operator& a, std::size_t n) {
  Operator out = Operator::Identity(1, 1);
  for (std::size_t i = 0; i < n; ++i) out = tensor(out, a);
  return out;
}

/// All eigenvalues of a Hermitian operator, descending.
inline Spectrum hermitian_spectrum(Operator&& h) {
  detail::require_hermitian(h, "hermitian_spectrum");
  return detail::eigenvalues_by_blocks(std::move(h));
}

inline Spectrum hermitian_spectrum(const Operator& h) { return hermitian_spectrum(Operator(h)); }

/// Full eigendecomposition; meant for small operators (local Hamiltonians, reference states).
inline Eigensystem hermitian_eigensystem(const Operator& h) {
  detail::require_hermitian(h, "hermitian_eigensystem");
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success) throw Error("hermitian_eigensystem: no convergence");
  return Eigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

/// Sum of singular values. Hermitian inputs go through the eigenvalue path.
inline double trace_norm(Operator&& a) {
  detail::require_square(a, "trace_norm");
  if (hermitian_deviation(a) <= tol::kInputHermitian) {
    const Spectrum s = detail::eigenvalues_by_blocks(std::move(a));
    double sum = 0.0;
    for (double x : s.eigenvalues) sum += std::abs(x);
    return sum;
  }
  Eigen::BDCSVD<Operator> svd(a);
  return svd.singularValues().sum();
}

inline double trace_norm(const Operator& a) { return trace_norm(Operator(a)); }

/// Certified upper bound sqrt(dim)*||a||_F on the trace norm, with no eigensolve.
inline double trace_norm_upper_bound(const Operator& a) {
  return std::sqrt(static_cast<double>(a.rows())) * a.norm();
}

/// Reduced operator over the factors in `keep`, returned in layout order.
inline Operator partial_trace(const Operator& op, const TensorLayout& layout,
                              const std::vector<FactorLabel>& keep) {
  detail::require_square(op, "partial_trace");
  if (dim_of(op) != layout.total_dim()) {
    throw DimensionError("partial_trace: operator dimension " + std::to_string(op.rows()) +
                         " does not match layout dimension " + std::to_string(layout.total_dim()));
  }
  std::vector<bool> kept(layout.size(), false);
  for (const auto& label : keep) kept[layout.position_of(label)] = true;

  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  for (std::size_t f = 0; f < layout.size(); ++f) (kept[f] ? kept_dim : traced_dim) *= layout.dims()[f];

  // groups[t][k] = full index with traced part t and kept part k
  const std::size_t total = layout.total_dim();
  std::vector<Eigen::Index> groups(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    std::size_t k_idx = 0, t_idx = 0, k_mul = 1, t_mul = 1;
    for (std::size_t f = layout.size(); f-- > 0;) {
      const std::size_t d = layout.dims()[f];
      const std::size_t digit = rem % d;
      rem /= d;
      if (kept[f]) {
        k_idx += digit * k_mul;
        k_mul *= d;
      } else {
        t_idx += digit * t_mul;
        t_mul *= d;
      }
    }
    groups[t_idx * kept_dim + k_idx] = static_cast<Eigen::Index>(i);
  }

  const auto kd = static_cast<Eigen::Index>(kept_dim);
  Operator out = Operator::Zero(kd, kd);
  for (std::size_t t = 0; t < traced_dim; ++t) {
    const Eigen::Index* g = groups.data() + t * kept_dim;
    for (Eigen::Index c = 0; c < kd; ++c) {
      for (Eigen::Index r = 0; r < kd; ++r) out(r, c) += op(g[r], g[c]);
    }
  }
  return out;
}

}  // namespace colmod
