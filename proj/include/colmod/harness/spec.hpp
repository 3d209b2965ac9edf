#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "colmod/analytic/bloch.hpp"
#include "colmod/core/errors.hpp"
#include "colmod/engine/collision.hpp"

namespace colmod::harness {

enum class Mode { kExact, kAnalytic, kBoth };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::kExact: return "exact";
    case Mode::kAnalytic: return "analytic";
    case Mode::kBoth: return "both";
  }
  return "?";
}

/// Bad configuration input; `field` names the key or flag, `line` is 0 for
/// values that did not come from a file.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, std::size_t line, const std::string& what)
      : Error(format(field, line, what)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, std::size_t line, const std::string& what) {
    std::string out = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
    return out + field + ": " + what;
  }

  std::string field_;
  std::size_t line_;
};

struct RunSpec {
  Mode mode = Mode::kExact;
  double theta = 0.75;
  double beta = 1.0;
  std::size_t dim = 2;
  std::size_t n_steps = 12;
  std::optional<BlochVector> bloch;  ///< qubit initial state
  std::vector<double> populations;   ///< diagonal initial state, any d
  std::vector<double> energies;      ///< diagonal Hamiltonian; empty selects the spin default
  Protocol protocol = PlainProtocol{};
  std::size_t memory_cap = kDefaultMemoryCap;
  std::size_t mi_raw_cap = 2048;

  std::vector<double> sweep_theta;
  std::vector<double> sweep_beta;
  std::vector<BlochVector> sweep_bloch;

  std::size_t analytic_steps = 0;  ///< extend qubit runs analytically up to this step
  bool factorization = false;      ///< t_trace_norm, t_bound, product_distance columns
  std::string output_path;
  bool emit_plots = false;
  std::size_t jobs = 1;

  Operator hamiltonian() const {
    if (energies.empty()) return spin_hamiltonian(dim);
    Operator h = Operator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < energies.size(); ++j) h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = energies[j];
    return h;
  }

  void validate() const {
    if (dim < 2) throw ConfigError("dim", 0, "must be >= 2");
    if (!energies.empty() && energies.size() != dim) throw ConfigError("energies", 0, "needs exactly dim entries");
    if (!populations.empty() && populations.size() != dim) throw ConfigError("populations", 0, "needs exactly dim entries");
    if (bloch && !populations.empty()) throw ConfigError("bloch", 0, "give either bloch or populations");
    if ((bloch || !sweep_bloch.empty()) && dim != 2) throw ConfigError("bloch", 0, "Bloch vectors need dim = 2");
    if (mode != Mode::kExact && dim != 2) throw ConfigError("mode", 0, to_string(mode) + " mode requires dim = 2");
    if (mode != Mode::kExact && !populations.empty()) throw ConfigError("mode", 0, "analytic modes take a Bloch vector");
    if (factorization && !std::holds_alternative<PlainProtocol>(protocol)) {
      throw ConfigError("factorization", 0, "not available with dephasing");
    }
    if (mode != Mode::kExact && !std::holds_alternative<PlainProtocol>(protocol)) {
      throw ConfigError("dephase_every", 0, "dephasing needs exact mode");
    }
    if (analytic_steps > 0 && dim != 2) throw ConfigError("analytic_steps", 0, "needs dim = 2");
    if (jobs == 0) throw ConfigError("jobs", 0, "must be >= 1");
    for (const auto& entry : expand()) {
      try {
        entry.cfg.validate();
      } catch (const Error& e) {
        throw ConfigError("run " + std::to_string(entry.run_id), 0, e.what());
      }
      if (mode != Mode::kExact && !std::isfinite(entry.cfg.beta)) {
        throw ConfigError("beta", 0, "analytic ledger needs finite beta");
      }
    }
  }

  struct Entry {
    std::size_t run_id = 0;
    CollisionConfig cfg;
    std::optional<BlochVector> r0;
  };

  /// One entry per sweep point; Bloch vectors vary slowest, then beta, then theta.
  std::vector<Entry> expand() const {
    const std::vector<double> thetas = sweep_theta.empty() ? std::vector<double>{theta} : sweep_theta;
    const std::vector<double> betas = sweep_beta.empty() ? std::vector<double>{beta} : sweep_beta;
    std::vector<std::optional<BlochVector>> states;
    if (!sweep_bloch.empty()) {
      for (const auto& b : sweep_bloch) states.emplace_back(b);
    } else if (bloch) {
      states.emplace_back(bloch);
    } else if (populations.empty() && dim == 2) {
      states.emplace_back(BlochVector{});
    } else {
      states.emplace_back(std::nullopt);
    }
    std::vector<Entry> out;
    for (const auto& st : states) {
      for (double b : betas) {
        for (double t : thetas) {
          Entry e;
          e.run_id = out.size();
          e.r0 = st;
          e.cfg.theta = t;
          e.cfg.beta = b;
          e.cfg.dim = dim;
          e.cfg.n_steps = n_steps;
          e.cfg.local_hamiltonian = hamiltonian();
          e.cfg.protocol = protocol;
          e.cfg.memory_cap = memory_cap;
          e.cfg.initial_system = initial_state(st);
          out.push_back(std::move(e));
        }
      }
    }
    return out;
  }

 private:
  DensityMatrix initial_state(const std::optional<BlochVector>& st) const {
    if (st) {
      try {
        return density_from_bloch(*st);
      } catch (const DomainError& e) {
        throw ConfigError("bloch", 0, e.what());
      }
    }
    if (populations.empty()) return DensityMatrix::maximally_mixed(dim);
    Operator rho = Operator::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < dim; ++j) rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = populations[j];
    try {
      return DensityMatrix(std::move(rho));
    } catch (const ValidationError& e) {
      throw ConfigError("populations", 0, e.what());
    }
  }
};

/// Four initial states at beta = 1, theta = 0.75: 12 exact collisions, analytic to 30.
inline RunSpec preset_fig1() {
  RunSpec spec;
  spec.mode = Mode::kBoth;
  spec.theta = 0.75;
  spec.beta = 1.0;
  spec.n_steps = 12;
  spec.analytic_steps = 30;
  spec.sweep_bloch = {{0, 0, 1}, {0.5, 0, 0}, {1, 0, 0}, {0, 0, 0}};
  return spec;
}

/// r0 = (1/2, 0, 0) at beta = 1 and 0.5 over a theta sweep.
inline RunSpec preset_fig2() {
  RunSpec spec;
  spec.mode = Mode::kBoth;
  spec.n_steps = 12;
  spec.analytic_steps = 30;
  spec.bloch = BlochVector{0.5, 0, 0};
  spec.sweep_beta = {1.0, 0.5};
  spec.sweep_theta = {0.3, 0.75, 1.2, 1.5};
  return spec;
}

}  // namespace colmod::harness
