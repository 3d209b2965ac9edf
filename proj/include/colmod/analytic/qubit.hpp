#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "colmod/analytic/bloch.hpp"
#include "colmod/core/entropy.hpp"
#include "colmod/core/errors.hpp"

// Closed-form qubit dynamics of the partial-swap collisional model with
// H = sigma_z/2. The single-collision channel is
//   rho -> cos^2(t) rho + sin^2(t) eta + i sin(t)cos(t) [eta, rho],
// so the z component relaxes as r_z -> cos^2 r_z + sin^2 s while the
// transverse part w = r_x + i r_y is multiplied by cos(t)(cos(t) - i s sin(t)):
// it contracts and precesses about z. The ancilla leaving the collision has
//   s_z = sin^2 r_z + cos^2 s,   w_b = sin(t)(sin(t) + i s cos(t)) w.

namespace colmod::qubit {

namespace detail {

inline std::complex<double> transverse(BlochVector r) { return {r.x, r.y}; }

inline std::complex<double> system_factor(double theta, double s) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return c * std::complex<double>(c, -s * sn);
}

inline std::complex<double> ancilla_factor(double theta, double s) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return sn * std::complex<double>(sn, s * c);
}

inline BlochVector make(std::complex<double> w, double z) { return {w.real(), w.imag(), z}; }

}  // namespace detail

/// One collision acting on the system Bloch vector.
inline BlochVector recursion_step(BlochVector r_prev, double theta, double s) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  return detail::make(detail::system_factor(theta, s) * detail::transverse(r_prev),
                      c2 * r_prev.z + s2 * s);
}

/// Bloch vector of the ancilla leaving a collision with a system in r_prev.
inline BlochVector ancilla_output(BlochVector r_prev, double theta, double s) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  return detail::make(detail::ancilla_factor(theta, s) * detail::transverse(r_prev),
                      s2 * r_prev.z + c2 * s);
}

struct ClosedForm {
  BlochVector r;
  double length = 0.0;
  /// r_z^(n) - r_z^(0) = (cos^{2n} - 1)(r_z^(0) - s).
  double dz = 0.0;
};

/// r^(n) after n collisions, without iterating.
inline ClosedForm closed_form(BlochVector r0, double theta, double s, std::size_t n) {
  if (n == 0) return {r0, r0.norm(), 0.0};
  const double decay = std::pow(std::cos(theta), 2.0 * static_cast<double>(n));
  const double dz0 = r0.z - s;
  const std::complex<double> w =
      std::pow(detail::system_factor(theta, s), static_cast<double>(n)) * detail::transverse(r0);
  const double z = s + decay * dz0;
  // |r|^2 = s^2 + 2 s decay dz0 + decay^2 dz0^2 + |w|^2
  const double len2 = s * s + 2.0 * s * decay * dz0 + decay * decay * dz0 * dz0 + std::norm(w);
  ClosedForm out;
  out.r = detail::make(w, z);
  out.length = std::sqrt(std::max(len2, 0.0));
  out.dz = (decay - 1.0) * dz0;
  return out;
}

/// Ancilla output vector of the n-th collision (n >= 1).
inline BlochVector ancilla_closed_form(BlochVector r0, double theta, double s, std::size_t n) {
  if (n == 0) throw DomainError("ancilla_closed_form: collisions are numbered from 1");
  return ancilla_output(closed_form(r0, theta, s, n - 1).r, theta, s);
}

/// Entropy of a qubit with Bloch length `len`.
inline double entropy_from_length(double len) { return binary_entropy(0.5 * (1.0 + std::min(len, 1.0))); }

struct AnalyticStep {
  std::size_t n = 0;
  BlochVector r;             ///< system after n collisions
  BlochVector ancilla_out;   ///< ancilla n after its collision
  double length = 0.0;       ///< |r^(n)|
  double dS_A = 0.0;         ///< S(rho_A^(n)) - S(rho_A^(0))
  double dQ_A = 0.0;         ///< (r_z^(n) - r_z^(0))/2
  double beta_dQ_A = 0.0;
  double dS_B_loc = 0.0;     ///< sum_k S(rho_bk) - n S(eta)
  double incr_dS_A = 0.0;
  double incr_beta_dQ_A = 0.0;
  double incr_neg_dS_b = 0.0;  ///< S(eta) - S(rho_bn)
};

struct AnalyticTrajectory {
  BlochVector r0;
  double theta = 0.0;
  double beta = 0.0;
  double s = 0.0;
  std::vector<AnalyticStep> steps;
};

/// Closed-form ledger for n = 1..n_steps. beta must be finite.
inline AnalyticTrajectory analytic_ledger(BlochVector r0, double theta, double beta, std::size_t n_steps) {
  if (!std::isfinite(beta)) throw DomainError("analytic_ledger: beta must be finite");
  if (r0.norm() > 1.0 + 1e-12) throw DomainError("analytic_ledger: |r0| > 1");
  AnalyticTrajectory traj{r0, theta, beta, gibbs_bloch_z(beta), {}};
  const double s = traj.s;
  const double s_eta = binary_entropy(0.5 * (1.0 + s));
  const double s0 = entropy_from_length(r0.norm());
  double local_sum = 0.0;
  double prev_entropy = s0;
  double prev_z = r0.z;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const ClosedForm cf = closed_form(r0, theta, s, n);
    const BlochVector anc = ancilla_closed_form(r0, theta, s, n);
    const double s_n = entropy_from_length(cf.length);
    const double s_anc = entropy_from_length(anc.norm());
    local_sum += s_anc - s_eta;

    AnalyticStep st;
    st.n = n;
    st.r = cf.r;
    st.ancilla_out = anc;
    st.length = cf.length;
    st.dS_A = s_n - s0;
    st.dQ_A = 0.5 * cf.dz;
    st.beta_dQ_A = beta * st.dQ_A;
    st.dS_B_loc = local_sum;
    st.incr_dS_A = s_n - prev_entropy;
    st.incr_beta_dQ_A = beta * 0.5 * (cf.r.z - prev_z);
    st.incr_neg_dS_b = s_eta - s_anc;
    traj.steps.push_back(st);

    prev_entropy = s_n;
    prev_z = cf.r.z;
  }
  return traj;
}

}  // namespace colmod::qubit
