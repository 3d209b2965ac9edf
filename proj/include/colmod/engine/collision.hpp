#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "colmod/core/density_matrix.hpp"
#include "colmod/core/errors.hpp"
#include "colmod/core/layout.hpp"
#include "colmod/core/linalg.hpp"
#include "colmod/core/states.hpp"
#include "colmod/engine/local_ops.hpp"

namespace colmod {

struct PlainProtocol {
  friend bool operator==(const PlainProtocol&, const PlainProtocol&) = default;
};

/// Fully dephase the system in its energy basis after every `every`-th collision.
struct DephasedProtocol {
  std::size_t every = 1;
  friend bool operator==(const DephasedProtocol&, const DephasedProtocol&) = default;
};

using Protocol = std::variant<PlainProtocol, DephasedProtocol>;

inline constexpr std::size_t kDefaultMemoryCap = std::size_t{1} << 13;

struct CollisionConfig {
  double theta = 0.0;
  double beta = 1.0;  ///< +infinity selects ground-state ancillas
  std::size_t dim = 2;
  std::size_t n_steps = 0;
  DensityMatrix initial_system = DensityMatrix::maximally_mixed(2);
  Operator local_hamiltonian = spin_hamiltonian(2);
  Protocol protocol = PlainProtocol{};
  std::size_t memory_cap = kDefaultMemoryCap;

  void validate() const {
    if (!(theta > -std::numbers::pi && theta <= std::numbers::pi)) {
      throw DomainError("theta must lie in (-pi, pi]");
    }
    if (std::isnan(beta) || beta < 0.0) throw DomainError("beta must be >= 0");
    if (dim < 2) throw DomainError("local dimension must be >= 2");
    if (initial_system.dim() != dim) throw DimensionError("initial state dimension differs from d");
    if (dim_of(local_hamiltonian) != dim || local_hamiltonian.cols() != local_hamiltonian.rows()) {
      throw DimensionError("local Hamiltonian dimension differs from d");
    }
    if (hermitian_deviation(local_hamiltonian) > tol::kInputHermitian) {
      throw ValidationError("local Hamiltonian is not Hermitian");
    }
    if (const auto* p = std::get_if<DephasedProtocol>(&protocol); p && p->every == 0) {
      throw DomainError("dephasing period must be >= 1");
    }
  }

  DensityMatrix ancilla_state() const {
    return std::isinf(beta) ? ground_state_projector(local_hamiltonian) : gibbs_state(local_hamiltonian, beta);
  }

  /// False when theta is a multiple of pi: the collisions then never thermalize the system.
  bool thermalizes() const { return std::abs(std::sin(theta)) > 1e-12; }
};

/// System plus the ancillas that have collided so far, in collision order.
class JointState {
 public:
  JointState(DensityMatrix rho, TensorLayout layout, std::size_t n_collided)
      : rho_(std::move(rho)), layout_(std::move(layout)), n_collided_(n_collided) {
    if (layout_.total_dim() != rho_.dim()) throw DimensionError("JointState: layout does not match state");
    if (layout_.size() != n_collided_ + 1) throw DimensionError("JointState: layout/ancilla count mismatch");
  }

  static JointState initial(const CollisionConfig& cfg) {
    return JointState(cfg.initial_system, TensorLayout::system_with_ancillas(cfg.dim, 0), 0);
  }

  const DensityMatrix& rho() const noexcept { return rho_; }
  const TensorLayout& layout() const noexcept { return layout_; }
  std::size_t n_collided() const noexcept { return n_collided_; }
  std::size_t local_dim() const { return layout_.dims().front(); }
  std::size_t dim() const noexcept { return rho_.dim(); }

  DensityMatrix release_rho() && { return std::move(rho_); }

 private:
  DensityMatrix rho_;
  TensorLayout layout_;
  std::size_t n_collided_ = 0;
};

/// S|i>|j> = |j>|i> on C^d (x) C^d.
inline Operator swap_operator(std::size_t d) {
  if (d < 2) throw DomainError("swap_operator: d must be >= 2");
  const auto n = static_cast<Eigen::Index>(d);
  Operator s = Operator::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) s(i * n + j, j * n + i) = 1.0;
  return s;
}

/// U = cos(theta) I + i sin(theta) S.
inline Operator partial_swap(double theta, std::size_t d) {
  const Operator s = swap_operator(d);
  return std::cos(theta) * identity(d * d) + Complex(0.0, std::sin(theta)) * s;
}

/// One collision: append a fresh ancilla and apply the partial swap on (system, new ancilla).
inline JointState step(JointState state, const CollisionConfig& cfg) {
  const std::size_t d = cfg.dim;
  if (state.local_dim() != d) throw DimensionError("step: state does not match config");
  const std::size_t next = state.n_collided() + 1;
  const std::size_t new_dim = state.dim() * d;
  if (new_dim > cfg.memory_cap) {
    throw ResourceError("joint dimension " + std::to_string(new_dim) + " exceeds memory cap " +
                            std::to_string(cfg.memory_cap) + " at step " + std::to_string(next),
                        new_dim, next);
  }
  TensorLayout layout = state.layout();
  layout.append(FactorLabel::ancilla(next), d);

  Operator x = tensor(std::move(state).release_rho().release(), cfg.ancilla_state().op());
  local::conjugate_edge(x, partial_swap(cfg.theta, d), d);

  const double dev = hermitian_deviation(x);
  if (dev > tol::kInputHermitian) {
    throw InvariantViolation("step: Hermiticity drift " + std::to_string(dev) + " at step " + std::to_string(next));
  }
  symmetrize_in_place(x);
  return JointState(DensityMatrix(std::move(x), Check::kStructural), std::move(layout), next);
}

/// Eigenvectors of h as columns, ordered by descending energy. Diagonal h
/// yields an exact permutation matrix.
inline Operator dephasing_basis(const Operator& h) {
  const Eigen::Index n = h.rows();
  if (h.isDiagonal(0.0)) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return h(a, a).real() > h(b, b).real(); });
    Operator v = Operator::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) v(order[static_cast<std::size_t>(j)], j) = 1.0;
    return v;
  }
  const Eigensystem es = hermitian_eigensystem(h);
  return es.vectors.rowwise().reverse();
}

/// Zero the system-index coherences of the joint state in the energy basis.
inline JointState full_dephase_system(JointState state, const CollisionConfig& cfg) {
  const std::size_t d = state.local_dim();
  const Operator v = dephasing_basis(cfg.local_hamiltonian);
  const auto dd = static_cast<Eigen::Index>(d);
  const bool permutation = cfg.local_hamiltonian.isDiagonal(0.0);
  TensorLayout layout = state.layout();
  const std::size_t n = state.n_collided();
  Operator x = std::move(state).release_rho().release();
  const Eigen::Index rest = x.rows() / dd;
  if (permutation) {
    for (Eigen::Index a = 0; a < dd; ++a)
      for (Eigen::Index b = 0; b < dd; ++b)
        if (a != b) x.block(a * rest, b * rest, rest, rest).setZero();
  } else {
    Operator out = Operator::Zero(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < dd; ++j) {
      const Operator p = v.col(j) * v.col(j).adjoint();
      for (Eigen::Index a = 0; a < dd; ++a)
        for (Eigen::Index b = 0; b < dd; ++b)
          for (Eigen::Index c = 0; c < dd; ++c)
            for (Eigen::Index e = 0; e < dd; ++e) {
              const Complex k = p(a, c) * p(e, b);
              if (k != Complex(0.0)) out.block(a * rest, b * rest, rest, rest) += k * x.block(c * rest, e * rest, rest, rest);
            }
    }
    x = std::move(out);
    symmetrize_in_place(x);
  }
  return JointState(DensityMatrix(std::move(x), Check::kStructural), std::move(layout), n);
}

/// Drive cfg.n_steps collisions, calling on_step(state) after each one
/// (after dephasing, when the protocol dephases). Returns the final state.
template <class Observer>
JointState run(const CollisionConfig& cfg, Observer&& on_step) {
  cfg.validate();
  JointState state = JointState::initial(cfg);
  const auto* dephased = std::get_if<DephasedProtocol>(&cfg.protocol);
  for (std::size_t n = 1; n <= cfg.n_steps; ++n) {
    state = step(std::move(state), cfg);
    if (dephased && n % dephased->every == 0) state = full_dephase_system(std::move(state), cfg);
    on_step(static_cast<const JointState&>(state));
  }
  return state;
}

/// All snapshots; memory grows as the sum of d^(2(n+1)), so keep n small.
inline std::vector<JointState> run(const CollisionConfig& cfg) {
  std::vector<JointState> snapshots;
  snapshots.reserve(cfg.n_steps);
  run(cfg, [&](const JointState& s) { snapshots.push_back(s); });
  return snapshots;
}

inline DensityMatrix reduced_system(const JointState& state) {
  return partial_trace(state.rho(), state.layout(), {FactorLabel::system()});
}

/// Joint state of every collided ancilla. For n = 0 this is the trivial 1x1 state.
inline DensityMatrix reduced_bath(const JointState& state) {
  if (state.n_collided() == 0) return DensityMatrix(identity(1), Check::kStructural);
  Operator b = local::trace_first(state.rho().op(), state.local_dim());
  symmetrize_in_place(b);
  return DensityMatrix(std::move(b), Check::kStructural);
}

inline DensityMatrix reduced_ancilla(const JointState& state, std::size_t k) {
  if (k == 0 || k > state.n_collided()) {
    throw LabelError("reduced_ancilla: ancilla " + std::to_string(k) + " has not collided");
  }
  return partial_trace(state.rho(), state.layout(), {FactorLabel::ancilla(k)});
}

/// Tr[H (rho_n - rho_0)].
inline double heat_system(const CollisionConfig& cfg, const DensityMatrix& rho_0, const DensityMatrix& rho_n) {
  if (rho_0.dim() != cfg.dim || rho_n.dim() != cfg.dim) throw DimensionError("heat_system: states must have dim d");
  return expectation(cfg.local_hamiltonian, rho_n) - expectation(cfg.local_hamiltonian, rho_0);
}

/// Single-collision channel on the system alone.
inline DensityMatrix collision_channel(const DensityMatrix& rho, const CollisionConfig& cfg) {
  const std::size_t d = cfg.dim;
  Operator x = tensor(rho.op(), cfg.ancilla_state().op());
  local::conjugate_edge(x, partial_swap(cfg.theta, d), d);
  Operator r = partial_trace(x, TensorLayout::system_with_ancillas(d, 1), {FactorLabel::system()});
  symmetrize_in_place(r);
  return DensityMatrix(std::move(r), Check::kStructural);
}

}  // namespace colmod
