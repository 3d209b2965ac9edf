#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "colmod/core/entropy.hpp"
#include "colmod/core/errors.hpp"
#include "colmod/engine/collision.hpp"
#include "colmod/engine/local_ops.hpp"

namespace colmod {

/// c(theta) = |cos^2 theta| + 2 |sin theta cos theta|; the correlated part T
/// contracts in trace norm by at most this factor per collision.
inline double contraction_factor(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return c * c + 2.0 * std::abs(s * c);
}

/// True when the contraction is strict enough to be asserted; c = 1 exactly
/// at |theta| = arctan 2 and the bound is then vacuous.
inline bool contraction_is_strict(double theta) { return contraction_factor(theta) < 1.0 - 1e-12; }

/// Joint state split as R + T with R = eta_A (x) R_B and T the part still
/// correlated with the system. R is held through its bath factor R_B.
class RTDecomposition {
 public:
  /// R = 0, T = rho_A^0; for a Gibbs input R holds the whole state and T = 0.
  static RTDecomposition init(const CollisionConfig& cfg, double gibbs_tolerance = 1e-14) {
    cfg.validate();
    RTDecomposition rt;
    rt.d_ = cfg.dim;
    rt.eta_ = cfg.ancilla_state().op();
    const double gap = (cfg.initial_system.op() - rt.eta_).cwiseAbs().maxCoeff();
    rt.gibbs_input_ = gap <= gibbs_tolerance;
    if (rt.gibbs_input_) {
      rt.r_bath_ = Operator::Ones(1, 1);
      rt.t_ = Operator::Zero(rt.eta_.rows(), rt.eta_.cols());
    } else {
      rt.r_bath_ = Operator::Zero(1, 1);
      rt.t_ = cfg.initial_system.op();
    }
    rt.t0_norm_ = trace_norm(rt.t_);
    return rt;
  }

  /// One collision on both parts: R gains sin^2 S T S, T -> cos^2 T + i sin cos [S, T].
  friend RTDecomposition rt_step(RTDecomposition rt, const CollisionConfig& cfg) {
    if (cfg.dim != rt.d_) throw DimensionError("rt_step: configuration dimension mismatch");
    const double c = std::cos(cfg.theta);
    const double s = std::sin(cfg.theta);
    const std::size_t d = rt.d_;
    Operator t_ext = tensor(rt.t_, rt.eta_);
    // S (T (x) eta) S = eta_A (x) T with its system factor moved to the new slot.
    Operator r_next = tensor(rt.r_bath_, rt.eta_);
    if (!rt.gibbs_input_) r_next += (s * s) * local::rotate_first_to_last(rt.t_, d);
    rt.r_bath_ = std::move(r_next);
    rt.t_ = Operator();
    const auto dd = static_cast<Eigen::Index>(d);
    const Complex k(0.0, s * c);
    Operator sy(dd * dd, dd * dd);
    local::for_each_edge_block(t_ext, d, [&](Operator& y) {
      for (Eigen::Index col = 0; col < dd * dd; ++col)
        for (Eigen::Index a = 0; a < dd; ++a)
          for (Eigen::Index b = 0; b < dd; ++b) sy(a * dd + b, col) = y(b * dd + a, col);
      for (Eigen::Index a = 0; a < dd; ++a)
        for (Eigen::Index b = 0; b < dd; ++b)
          for (Eigen::Index row = 0; row < dd * dd; ++row) sy(row, a * dd + b) -= y(row, b * dd + a);
      y = (c * c) * y + k * sy;
    });
    symmetrize_in_place(t_ext);
    rt.t_ = std::move(t_ext);
    ++rt.n_;
    return rt;
  }

  std::size_t n() const noexcept { return n_; }
  bool gibbs_input() const noexcept { return gibbs_input_; }
  const Operator& T() const noexcept { return t_; }
  const Operator& R_bath() const noexcept { return r_bath_; }
  const Operator& eta() const noexcept { return eta_; }

  /// R = eta_A (x) R_B on the full register.
  Operator materialize_R() const { return tensor(eta_, r_bath_); }

  /// ||T||_1; T is Hermitian, so this is one eigensolve of the joint dimension.
  double t_trace_norm() const { return trace_norm(t_); }

  /// c(theta)^n ||T^(0)||_1.
  double t_bound(double theta) const {
    return std::pow(contraction_factor(theta), static_cast<double>(n_)) * t0_norm_;
  }

  struct Consistency {
    double max_entry_error = 0.0;
    double trace_norm_bound = 0.0;  ///< sqrt(D) ||R + T - rho||_F >= ||R + T - rho||_1
  };

  /// Compare R + T with an engine state without materializing R.
  Consistency consistency(const JointState& state) const {
    const Operator& rho = state.rho().op();
    if (rho.rows() != t_.rows()) throw DimensionError("RT consistency: engine state has another dimension");
    const Eigen::Index rest = r_bath_.rows();
    const auto dd = static_cast<Eigen::Index>(d_);
    Consistency out;
    double frob2 = 0.0;
    for (Eigen::Index a = 0; a < dd; ++a) {
      for (Eigen::Index b = 0; b < dd; ++b) {
        const auto diff = (eta_(a, b) * r_bath_ + t_.block(a * rest, b * rest, rest, rest) -
                           rho.block(a * rest, b * rest, rest, rest));
        frob2 += diff.squaredNorm();
        out.max_entry_error = std::max(out.max_entry_error, diff.cwiseAbs().maxCoeff());
      }
    }
    out.trace_norm_bound = std::sqrt(static_cast<double>(rho.rows()) * frob2);
    return out;
  }

 private:
  RTDecomposition() = default;

  std::size_t d_ = 2;
  std::size_t n_ = 0;
  bool gibbs_input_ = false;
  double t0_norm_ = 1.0;
  Operator eta_;
  Operator r_bath_;
  Operator t_;
};

inline RTDecomposition rt_init(const CollisionConfig& cfg) { return RTDecomposition::init(cfg); }

/// ||rho_AB - rho_A (x) rho_B||_1 across the system | bath cut.
inline double product_distance(const JointState& state) {
  if (state.n_collided() == 0) return 0.0;
  const std::size_t d = state.local_dim();
  const DensityMatrix rho_a = reduced_system(state);
  const DensityMatrix rho_b = reduced_bath(state);
  Operator diff = state.rho().op();
  const Eigen::Index rest = rho_b.op().rows();
  const auto dd = static_cast<Eigen::Index>(d);
  for (Eigen::Index a = 0; a < dd; ++a)
    for (Eigen::Index b = 0; b < dd; ++b) diff.block(a * rest, b * rest, rest, rest) -= rho_a.op()(a, b) * rho_b.op();
  symmetrize_in_place(diff);
  return trace_norm(std::move(diff));
}

struct FactorizationStep {
  std::size_t n = 0;
  double contraction_factor = 0.0;
  double t_bound = 0.0;
  std::optional<double> t_trace_norm;
  std::optional<double> product_distance;
  RTDecomposition::Consistency consistency;
};

struct FactorizationOptions {
  bool t_norm = true;
  bool product_distance = true;
};

/// Runs the engine alongside the R/T recursion, calling on_step(state, report) each collision.
template <class Observer>
std::vector<FactorizationStep> factorization_report(const CollisionConfig& cfg, FactorizationOptions opts,
                                                    Observer&& on_step) {
  if (!std::holds_alternative<PlainProtocol>(cfg.protocol)) {
    throw UnsupportedProtocolError("R/T decomposition applies to plain collisions only");
  }
  RTDecomposition rt = rt_init(cfg);
  std::vector<FactorizationStep> out;
  run(cfg, [&](const JointState& state) {
    rt = rt_step(std::move(rt), cfg);
    FactorizationStep st;
    st.n = state.n_collided();
    st.contraction_factor = contraction_factor(cfg.theta);
    st.t_bound = rt.t_bound(cfg.theta);
    st.consistency = rt.consistency(state);
    if (opts.t_norm) st.t_trace_norm = rt.t_trace_norm();
    if (opts.product_distance) st.product_distance = product_distance(state);
    on_step(state, st);
    out.push_back(st);
  });
  return out;
}

inline std::vector<FactorizationStep> factorization_report(const CollisionConfig& cfg, FactorizationOptions opts = {}) {
  return factorization_report(cfg, opts, [](const JointState&, const FactorizationStep&) {});
}

// Dephasing-assisted factorization (qubit system).

struct DephasingBlock {
  std::size_t q = 0;             ///< block index, 1-based
  std::size_t n = 0;             ///< collisions so far (q k)
  double accd_residual = 0.0;    ///< max(|M_jj - eta_j|, |M_01|) before dephasing
  double accd_bound = 0.0;       ///< cos^{2k} theta |r0 - s|
  double delta_norm = 0.0;       ///< ||Pi00 - (eta0/eta1) Pi11||_1
  double predicted_delta_norm = 0.0;  ///< ||Delta^(1)||_1 ||Delta(|0>)||_1^{q-1}
  double mutual_info = 0.0;      ///< across A | B after the dephasing
};

struct DephasingReport {
  std::size_t every = 0;
  double eta_ratio = 0.0;         ///< eta0 / eta1 in the descending-energy basis
  double ground_delta_norm = 0.0; ///< ||Delta(|0>)||_1 for one block started from |0>
  std::vector<DephasingBlock> blocks;
};

namespace detail {

/// System-diagonal blocks Pi^(j,j) = <v_j| rho |v_j>_A in the dephasing basis.
inline Operator system_block(const Operator& rho, const Operator& basis, Eigen::Index j, std::size_t d) {
  const auto dd = static_cast<Eigen::Index>(d);
  const Eigen::Index rest = rho.rows() / dd;
  Operator out = Operator::Zero(rest, rest);
  for (Eigen::Index a = 0; a < dd; ++a)
    for (Eigen::Index b = 0; b < dd; ++b) {
      const Complex k = std::conj(basis(a, j)) * basis(b, j);
      if (k != Complex(0.0)) out += k * rho.block(a * rest, b * rest, rest, rest);
    }
  return out;
}

inline Operator delta_operator(const Operator& rho, const Operator& basis, double ratio, std::size_t d) {
  Operator delta = system_block(rho, basis, 0, d) - ratio * system_block(rho, basis, 1, d);
  symmetrize_in_place(delta);
  return delta;
}

inline double rho_bloch_distance_to_gibbs(const CollisionConfig& cfg, const Operator& basis) {
  // |r0 - s| in the energy basis: twice the Hilbert-Schmidt distance scaled for a qubit.
  const Operator diff = basis.adjoint() * (cfg.initial_system.op() - cfg.ancilla_state().op()) * basis;
  return std::sqrt(2.0) * diff.norm();
}

}  // namespace detail

/// Block-by-block diagnostics of the dephased protocol: one block is
/// `every` collisions followed by full dephasing of the system.
inline DephasingReport dephased_delta_norm(const CollisionConfig& cfg) {
  const auto* proto = std::get_if<DephasedProtocol>(&cfg.protocol);
  if (proto == nullptr) throw UnsupportedProtocolError("dephased_delta_norm needs the dephased protocol");
  if (cfg.dim != 2) throw UnsupportedProtocolError("dephased_delta_norm is defined for a qubit system");
  cfg.validate();
  if (!std::isfinite(cfg.beta) || cfg.beta == 0.0) throw DomainError("dephased_delta_norm: beta must be finite and > 0");

  const std::size_t k = proto->every;
  const Operator basis = dephasing_basis(cfg.local_hamiltonian);
  const Operator eta = cfg.ancilla_state().op();
  const double eta0 = (basis.col(0).adjoint() * eta * basis.col(0))(0, 0).real();
  const double eta1 = (basis.col(1).adjoint() * eta * basis.col(1))(0, 0).real();

  DephasingReport report;
  report.every = k;
  report.eta_ratio = eta0 / eta1;

  {
    CollisionConfig ground = cfg;
    ground.protocol = PlainProtocol{};
    ground.n_steps = k;
    ground.initial_system = DensityMatrix(basis.col(0) * basis.col(0).adjoint(), Check::kStructural);
    const JointState s = run(ground, [](const JointState&) {});
    report.ground_delta_norm = trace_norm(detail::delta_operator(s.rho().op(), basis, report.eta_ratio, 2));
  }

  const double accd_bound =
      std::pow(std::cos(cfg.theta), 2.0 * static_cast<double>(k)) * detail::rho_bloch_distance_to_gibbs(cfg, basis);
  JointState state = JointState::initial(cfg);
  double first_norm = 0.0;
  for (std::size_t n = 1; n <= cfg.n_steps; ++n) {
    state = step(std::move(state), cfg);
    if (n % k != 0) continue;
    DephasingBlock blk;
    blk.q = n / k;
    blk.n = n;
    const Operator m = basis.adjoint() * reduced_system(state).op() * basis;
    blk.accd_residual = std::max({std::abs(m(0, 0) - eta0), std::abs(m(1, 1) - eta1), std::abs(m(0, 1))});
    blk.accd_bound = accd_bound;
    blk.delta_norm = trace_norm(detail::delta_operator(state.rho().op(), basis, report.eta_ratio, 2));
    if (blk.q == 1) first_norm = blk.delta_norm;
    blk.predicted_delta_norm = first_norm * std::pow(report.ground_delta_norm, static_cast<double>(blk.q - 1));

    state = full_dephase_system(std::move(state), cfg);
    const double s_a = von_neumann_entropy(reduced_system(state));
    const double s_b = von_neumann_entropy(reduced_bath(state));
    blk.mutual_info = s_a + s_b - von_neumann_entropy(state.rho());
    report.blocks.push_back(blk);
  }
  return report;
}

}  // namespace colmod
