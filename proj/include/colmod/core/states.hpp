#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "colmod/core/density_matrix.hpp"
#include "colmod/core/errors.hpp"
#include "colmod/core/linalg.hpp"
#include "colmod/core/types.hpp"

namespace colmod {

inline Operator pauli_x() {
  Operator m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Operator pauli_y() {
  Operator m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

inline Operator pauli_z() {
  Operator m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// diag((d-1)/2, ..., -(d-1)/2); sigma_z/2 for a qubit, so |0> carries the highest energy.
inline Operator spin_hamiltonian(std::size_t dim) {
  Operator h = Operator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) =
        0.5 * static_cast<double>(dim - 1) - static_cast<double>(j);
  }
  return h;
}

/// Thermal state exp(-beta h)/Z for finite beta >= 0.
inline DensityMatrix gibbs_state(const Operator& h, double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw DomainError("gibbs_state: beta must be finite and >= 0 (use ground_state_projector for beta=inf)");
  }
  const Eigensystem es = hermitian_eigensystem(h);
  const double e_min = es.values.minCoeff();
  RealVector weights = (-beta * (es.values.array() - e_min)).exp();
  weights /= weights.sum();
  Operator rho = es.vectors * weights.cast<Complex>().asDiagonal() * es.vectors.adjoint();
  symmetrize_in_place(rho);
  // Exact zeros for diagonal h keep downstream block structure intact.
  if (h.isDiagonal(0.0)) {
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      for (Eigen::Index r = 0; r < rho.rows(); ++r) {
        if (r != c) rho(r, c) = 0.0;
      }
    }
  }
  return DensityMatrix(std::move(rho), Check::kStructural);
}

/// Projector on the ground state of h; the beta -> infinity limit of gibbs_state.
inline DensityMatrix ground_state_projector(const Operator& h) {
  const Eigensystem es = hermitian_eigensystem(h);
  if (es.values.size() > 1 && es.values(1) - es.values(0) < 1e-12) {
    throw DomainError("ground_state_projector: ground state is degenerate");
  }
  const Eigen::VectorXcd v = es.vectors.col(0);
  Operator rho = v * v.adjoint();
  symmetrize_in_place(rho);
  return DensityMatrix(std::move(rho), Check::kStructural);
}

/// Tr[h rho].
inline double expectation(const Operator& h, const DensityMatrix& rho) {
  return (h.cwiseProduct(rho.op().transpose())).sum().real();
}

}  // namespace colmod
