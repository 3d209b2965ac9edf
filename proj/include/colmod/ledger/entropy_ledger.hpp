#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "colmod/core/entropy.hpp"
#include "colmod/core/errors.hpp"
#include "colmod/engine/collision.hpp"

namespace colmod {

/// Per-collision entropy and energy balance, all in nats. Quantities that
/// need the joint bath state are optional: they are absent in analytic mode
/// or when the bath eigensolve is switched off.
struct StepLedger {
  std::size_t n = 0;
  double dS_A = 0.0;
  double beta_dQ_A = 0.0;
  std::optional<double> neg_dS_B;
  double neg_dS_B_loc = 0.0;
  std::optional<double> mutual_info;      ///< raw when available, else the shortcut
  std::optional<double> mutual_info_raw;  ///< S_A + S_B - S_AB with S_AB from an eigensolve
  std::optional<double> mutual_info_shortcut;  ///< S_A + S_B - S(rho_A^0) - n S(eta)
  double clausius_gap = 0.0;
  std::optional<double> extrinsic_gap;
  std::optional<double> wolf_residual;
  double incr_dS_A = 0.0;
  double incr_beta_dQ_A = 0.0;
  double incr_neg_dS_b = 0.0;
  std::optional<double> incr_wolf_residual;
  Operator rho_A;  ///< reduced system state at step n
};

struct LedgerOptions {
  bool global_bath = true;             ///< eigensolve the joint bath state each step
  std::size_t mi_raw_cap = 2048;       ///< largest joint dimension for the raw S_AB eigensolve
  double mi_agreement = tol::kMutualInfoAgreement;
};

/// Incremental recorder: feed it the engine snapshots for n = 1, 2, ... in order.
class EntropyLedger {
 public:
  explicit EntropyLedger(const CollisionConfig& cfg, LedgerOptions opts = {})
      : opts_(opts),
        beta_(cfg.beta),
        h_(cfg.local_hamiltonian),
        eta_(cfg.ancilla_state()),
        rho0_(cfg.initial_system),
        conserving_(std::holds_alternative<PlainProtocol>(cfg.protocol)) {
    cfg.validate();
    if (!std::isfinite(beta_)) throw DomainError("entropy ledger: beta must be finite");
    s_eta_ = von_neumann_entropy(eta_);
    s_A0_ = von_neumann_entropy(rho0_);
    prev_rho_A_ = rho0_;
    prev_s_A_ = s_A0_;
  }

  /// The n = 0 row: every quantity vanishes for the product initial state.
  StepLedger initial() const {
    StepLedger row;
    row.neg_dS_B = 0.0;
    row.mutual_info = 0.0;
    row.extrinsic_gap = 0.0;
    row.wolf_residual = 0.0;
    row.incr_wolf_residual = 0.0;
    row.rho_A = rho0_.op();
    return row;
  }

  const StepLedger& record(const JointState& state) {
    const std::size_t n = state.n_collided();
    if (n != rows_.size() + 1) throw Error("entropy ledger: snapshots must arrive in collision order");
    const auto nd = static_cast<double>(n);

    StepLedger row;
    row.n = n;
    const DensityMatrix rho_A = reduced_system(state);
    const double s_A = von_neumann_entropy(rho_A);
    row.dS_A = s_A - s_A0_;
    row.beta_dQ_A = beta_ * expectation(h_, rho_A) - beta_ * expectation(h_, rho0_);
    row.clausius_gap = row.dS_A - row.beta_dQ_A;
    row.incr_dS_A = s_A - prev_s_A_;
    row.incr_beta_dQ_A = beta_ * (expectation(h_, rho_A) - expectation(h_, prev_rho_A_));

    // The newest ancilla never interacts again, so its entropies are final.
    const DensityMatrix rho_b = reduced_ancilla(state, n);
    const double s_b = von_neumann_entropy(rho_b);
    const double cross_b = cross_entropy(rho_b, eta_);
    local_sum_ += s_b - s_eta_;
    cross_sum_ += cross_b;
    row.neg_dS_B_loc = -local_sum_;
    row.incr_neg_dS_b = s_eta_ - s_b;
    const double rel_b = cross_b - s_b;
    row.incr_wolf_residual = row.incr_beta_dQ_A + (s_b - s_eta_) + rel_b;

    if (opts_.global_bath) {
      const double s_B = von_neumann_entropy(reduced_bath(state));
      const double dS_B = s_B - nd * s_eta_;
      row.neg_dS_B = -dS_B;
      row.extrinsic_gap = row.dS_A + dS_B;
      // S(rho_B || eta^n) = -S_B - Tr rho_B ln eta^n, and ln eta^n is a sum of local terms.
      row.wolf_residual = row.beta_dQ_A + dS_B + (cross_sum_ - s_B);
      if (conserving_) row.mutual_info_shortcut = s_A + s_B - (s_A0_ + nd * s_eta_);
      if (state.dim() <= opts_.mi_raw_cap) row.mutual_info_raw = s_A + s_B - von_neumann_entropy(state.rho());
      if (row.mutual_info_raw && row.mutual_info_shortcut &&
          std::abs(*row.mutual_info_raw - *row.mutual_info_shortcut) > opts_.mi_agreement) {
        throw InvariantViolation("mutual information: raw and conservation routes disagree at step " +
                                 std::to_string(n));
      }
      row.mutual_info = row.mutual_info_raw ? row.mutual_info_raw : row.mutual_info_shortcut;
    }
    row.rho_A = rho_A.op();

    prev_rho_A_ = rho_A;
    prev_s_A_ = s_A;
    rows_.push_back(std::move(row));
    return rows_.back();
  }

  const std::vector<StepLedger>& rows() const noexcept { return rows_; }
  double eta_entropy() const noexcept { return s_eta_; }
  double initial_entropy() const noexcept { return s_A0_; }

 private:
  LedgerOptions opts_;
  double beta_;
  Operator h_;
  DensityMatrix eta_;
  DensityMatrix rho0_;
  bool conserving_;
  double s_eta_ = 0.0;
  double s_A0_ = 0.0;
  DensityMatrix prev_rho_A_ = DensityMatrix::maximally_mixed(1);
  double prev_s_A_ = 0.0;
  double local_sum_ = 0.0;
  double cross_sum_ = 0.0;
  std::vector<StepLedger> rows_;
};

/// Ledger rows for n = 1..cfg.n_steps, running the engine.
inline std::vector<StepLedger> compute_ledger(const CollisionConfig& cfg, LedgerOptions opts = {}) {
  EntropyLedger ledger(cfg, opts);
  run(cfg, [&](const JointState& s) { ledger.record(s); });
  return ledger.rows();
}

/// Ledger over precomputed snapshots (snapshot i holds n = i + 1).
inline std::vector<StepLedger> compute_ledger(const std::vector<JointState>& trajectory, const CollisionConfig& cfg,
                                              LedgerOptions opts = {}) {
  EntropyLedger ledger(cfg, opts);
  for (const auto& s : trajectory) ledger.record(s);
  return ledger.rows();
}

struct IntrinsicPoint {
  double dS_A = 0.0;
  double beta_dQ_A = 0.0;
};

struct IncrementalPoint {
  double incr_dS_A = 0.0;
  double incr_beta_dQ_A = 0.0;
  double incr_neg_dS_b = 0.0;
  double incr_wolf_residual = 0.0;
};

inline std::vector<IntrinsicPoint> intrinsic_bound(const std::vector<JointState>& trajectory, const CollisionConfig& cfg) {
  std::vector<IntrinsicPoint> out;
  for (const auto& row : compute_ledger(trajectory, cfg, {.global_bath = false})) {
    out.push_back({row.dS_A, row.beta_dQ_A});
  }
  return out;
}

inline std::vector<double> extrinsic_bound(const std::vector<JointState>& trajectory, const CollisionConfig& cfg) {
  std::vector<double> out;
  for (const auto& row : compute_ledger(trajectory, cfg, {.mi_raw_cap = 0})) out.push_back(*row.neg_dS_B);
  return out;
}

inline std::vector<double> local_extrinsic_bound(const std::vector<JointState>& trajectory, const CollisionConfig& cfg) {
  std::vector<double> out;
  for (const auto& row : compute_ledger(trajectory, cfg, {.global_bath = false})) out.push_back(row.neg_dS_B_loc);
  return out;
}

inline std::vector<double> mutual_information_step(const std::vector<JointState>& trajectory,
                                                   const CollisionConfig& cfg) {
  std::vector<double> out;
  for (const auto& row : compute_ledger(trajectory, cfg)) out.push_back(*row.mutual_info);
  return out;
}

inline std::vector<IncrementalPoint> incremental_bounds(const std::vector<JointState>& trajectory,
                                                        const CollisionConfig& cfg) {
  std::vector<IncrementalPoint> out;
  for (const auto& row : compute_ledger(trajectory, cfg, {.global_bath = false})) {
    out.push_back({row.incr_dS_A, row.incr_beta_dQ_A, row.incr_neg_dS_b, *row.incr_wolf_residual});
  }
  return out;
}

inline std::vector<double> wolf_identity(const std::vector<JointState>& trajectory, const CollisionConfig& cfg) {
  std::vector<double> out;
  for (const auto& row : compute_ledger(trajectory, cfg, {.mi_raw_cap = 0})) out.push_back(*row.wolf_residual);
  return out;
}

/// Broken ledger invariants at one step, as readable messages.
/// `conserving` is false for dephased runs, where the ordering chain is not claimed.
inline std::vector<std::string> ledger_violations(const StepLedger& row, bool conserving = true,
                                                  double slack = tol::kInequalitySlack) {
  std::vector<std::string> out;
  auto fail = [&](const std::string& what) { out.push_back("step " + std::to_string(row.n) + ": " + what); };
  if (row.dS_A < row.beta_dQ_A - slack) fail("Clausius inequality dS_A >= beta dQ_A");
  if (row.incr_dS_A < row.incr_beta_dQ_A - slack) fail("incremental Clausius inequality");
  if (conserving) {
    if (row.incr_dS_A < row.incr_neg_dS_b - slack) fail("incremental extrinsic inequality");
    if (row.neg_dS_B) {
      if (row.dS_A < *row.neg_dS_B - slack) fail("ordering dS_A >= -dS_B");
      if (*row.neg_dS_B < row.neg_dS_B_loc - slack) fail("ordering -dS_B >= -dS_B_loc");
    }
    if (row.neg_dS_B_loc < row.beta_dQ_A - slack) fail("ordering -dS_B_loc >= beta dQ_A");
  }
  if (row.wolf_residual && std::abs(*row.wolf_residual) > slack) fail("Wolf identity residual");
  if (row.incr_wolf_residual && std::abs(*row.incr_wolf_residual) > slack) fail("incremental Wolf residual");
  if (conserving && row.mutual_info && row.extrinsic_gap && std::abs(*row.mutual_info - *row.extrinsic_gap) > slack) {
    fail("extrinsic gap differs from mutual information");
  }
  if (row.mutual_info && *row.mutual_info < -1e-9) fail("negative mutual information");
  return out;
}

/// Per-step violations plus the monotone Clausius gap across the trajectory.
inline std::vector<std::string> trajectory_violations(const std::vector<StepLedger>& rows, bool conserving = true,
                                                      double slack = tol::kInequalitySlack) {
  std::vector<std::string> out;
  double prev_gap = 0.0;
  for (const auto& row : rows) {
    for (auto& v : ledger_violations(row, conserving, slack)) out.push_back(std::move(v));
    if (row.clausius_gap < prev_gap - 1e-10) {
      out.push_back("step " + std::to_string(row.n) + ": Clausius gap decreased");
    }
    prev_gap = row.clausius_gap;
  }
  return out;
}

}  // namespace colmod
