#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "colmod/analytic/qubit.hpp"
#include "colmod/factorization/factorization.hpp"
#include "colmod/harness/csv.hpp"
#include "colmod/harness/spec.hpp"
#include "colmod/ledger/entropy_ledger.hpp"

namespace colmod::harness {

inline constexpr double kDeviationTolerance = 1e-9;
inline constexpr double kConsistencyTolerance = 1e-9;

struct RunOutcome {
  std::size_t run_id = 0;
  std::vector<CsvRow> rows;
  std::vector<std::string> violations;
  std::optional<DephasingReport> dephasing;
};

struct SpecResult {
  LedgerCsv csv;
  std::vector<RunOutcome> runs;

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    for (const auto& r : runs)
      for (const auto& v : r.violations) out.push_back("run " + std::to_string(r.run_id) + ", " + v);
    return out;
  }
};

namespace detail {

inline StepLedger ledger_from_analytic(const qubit::AnalyticStep& st) {
  StepLedger row;
  row.n = st.n;
  row.dS_A = st.dS_A;
  row.beta_dQ_A = st.beta_dQ_A;
  row.neg_dS_B_loc = -st.dS_B_loc;
  row.clausius_gap = st.dS_A - st.beta_dQ_A;
  row.incr_dS_A = st.incr_dS_A;
  row.incr_beta_dQ_A = st.incr_beta_dQ_A;
  row.incr_neg_dS_b = st.incr_neg_dS_b;
  row.rho_A = density_from_bloch(st.r).op();
  return row;
}

}  // namespace detail

/// One trajectory of a spec: exact ledger, closed forms, or both.
inline RunOutcome execute_entry(const RunSpec& spec, const RunSpec::Entry& entry) {
  const CollisionConfig& cfg = entry.cfg;
  const bool conserving = std::holds_alternative<PlainProtocol>(cfg.protocol);
  const bool qubit_closed_form = entry.r0.has_value() && std::isfinite(cfg.beta);
  const std::size_t exact_steps = spec.mode == Mode::kAnalytic ? 0 : cfg.n_steps;
  const std::size_t total_steps = std::max(cfg.n_steps, qubit_closed_form ? spec.analytic_steps : 0);

  RunOutcome out;
  out.run_id = entry.run_id;
  std::optional<qubit::AnalyticTrajectory> analytic;
  if (qubit_closed_form && (spec.mode != Mode::kExact || total_steps > exact_steps)) {
    analytic = qubit::analytic_ledger(*entry.r0, cfg.theta, cfg.beta, total_steps);
  }
  auto base_row = [&](std::size_t n) {
    CsvRow row;
    row.run_id = entry.run_id;
    row.theta = cfg.theta;
    row.beta = cfg.beta;
    row.r0 = entry.r0;
    row.step = n;
    return row;
  };

  if (exact_steps > 0) {
    CollisionConfig exact_cfg = cfg;
    exact_cfg.n_steps = exact_steps;
    EntropyLedger ledger(exact_cfg, {.global_bath = true, .mi_raw_cap = spec.mi_raw_cap});
    std::optional<RTDecomposition> rt;
    if (spec.factorization) rt = rt_init(exact_cfg);
    const bool strict = contraction_is_strict(cfg.theta);
    run(exact_cfg, [&](const JointState& state) {
      const std::size_t n = state.n_collided();
      CsvRow row = base_row(n);
      row.ledger = ledger.record(state);
      if (rt) {
        rt = rt_step(std::move(*rt), exact_cfg);
        row.t_bound = rt->t_bound(cfg.theta);
        row.t_trace_norm = rt->t_trace_norm();
        row.product_distance = product_distance(state);
        const auto cons = rt->consistency(state);
        if (cons.trace_norm_bound > kConsistencyTolerance) {
          out.violations.push_back("step " + std::to_string(n) + ": R + T differs from the joint state");
        }
        if (strict && *row.t_trace_norm > *row.t_bound + tol::kInequalitySlack) {
          out.violations.push_back("step " + std::to_string(n) + ": ||T||_1 exceeds the contraction bound");
        }
      }
      if (spec.mode == Mode::kBoth && analytic) {
        const auto& a = analytic->steps[n - 1];
        Deviations dev;
        dev.r = distance(bloch_from_density(DensityMatrix(row.ledger.rho_A, Check::kStructural)), a.r);
        dev.dS_A = std::abs(row.ledger.dS_A - a.dS_A);
        dev.beta_dQ_A = std::abs(row.ledger.beta_dQ_A - a.beta_dQ_A);
        dev.neg_dS_B_loc = std::abs(row.ledger.neg_dS_B_loc + a.dS_B_loc);
        if (dev.max() > kDeviationTolerance) {
          out.violations.push_back("step " + std::to_string(n) + ": exact and closed forms disagree");
        }
        row.deviations = dev;
      }
      out.rows.push_back(std::move(row));
    });
    for (auto& v : trajectory_violations(ledger.rows(), conserving)) out.violations.push_back(std::move(v));
    if (!conserving && cfg.dim == 2 && std::isfinite(cfg.beta) && cfg.beta > 0.0) {
      out.dephasing = dephased_delta_norm(exact_cfg);
    }
  }

  if (analytic) {
    double prev_gap = out.rows.empty() ? 0.0 : out.rows.back().ledger.clausius_gap;
    for (std::size_t n = exact_steps + 1; n <= total_steps; ++n) {
      CsvRow row = base_row(n);
      row.analytic = true;
      row.ledger = detail::ledger_from_analytic(analytic->steps[n - 1]);
      for (auto& v : ledger_violations(row.ledger)) out.violations.push_back(std::move(v));
      if (row.ledger.clausius_gap < prev_gap - 1e-10) {
        out.violations.push_back("step " + std::to_string(n) + ": Clausius gap decreased");
      }
      prev_gap = row.ledger.clausius_gap;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

/// Runs every sweep entry, `spec.jobs` at a time, and gathers rows in run order.
/// The first failure in run order is rethrown after all workers finish.
inline SpecResult run_spec(const RunSpec& spec) {
  spec.validate();
  const auto entries = spec.expand();
  std::vector<RunOutcome> outcomes(entries.size());
  std::vector<std::exception_ptr> errors(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        outcomes[i] = execute_entry(spec, entries[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t workers = std::min(spec.jobs, std::max<std::size_t>(entries.size(), 1));
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SpecResult result{LedgerCsv(spec.mode == Mode::kBoth), {}};
  for (auto& o : outcomes) {
    for (const auto& row : o.rows) result.csv.add(row);
    result.runs.push_back(std::move(o));
  }
  return result;
}

}  // namespace colmod::harness
