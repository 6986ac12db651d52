#include "mmoc/qubit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mmoc/parallel.hpp"

namespace mmoc {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// sin(Omega h)/Omega and cos(Omega h) with a series branch where the phase
// Omega h is too small for the quotient to be formed safely.
struct TrigPair {
  double c;  // cos(Omega h)
  double a;  // sin(Omega h) / Omega
};

TrigPair trig_pair(double omega, double h) {
  const double z = omega * h;
  if (std::abs(z) < 1e-8) {
    const double z2 = z * z;
    return {1.0 - 0.5 * z2, h * (1.0 - z2 / 6.0)};
  }
  return {std::cos(z), std::sin(z) / omega};
}

}  // namespace

QubitState pauli_step(const QubitState& psi, double detuning, double u, double dt) {
  const double omega = std::hypot(detuning, u);
  const auto [c, a] = trig_pair(omega, dt);
  QubitState out;
  out[0] = c * psi[0] - kI * a * (detuning * psi[0] + u * psi[1]);
  out[1] = c * psi[1] - kI * a * (u * psi[0] - detuning * psi[1]);
  return out;
}

Eigen::Matrix2cd pauli_step_control_derivative(double detuning, double u, double dt) {
  const double omega = std::hypot(detuning, u);
  const double z = omega * dt;
  const auto [c, a] = trig_pair(omega, dt);

  // B = d/du [ sin(Omega dt)/Omega ] / u = (cos(z) dt Omega - sin(z)) / Omega^3.
  double b;
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    b = -(dt * dt * dt / 3.0) * (1.0 - z2 / 10.0);
  } else {
    b = (c * dt * omega - std::sin(z)) / (omega * omega * omega);
  }

  const double dc_du = -u * dt * a;     // d cos(Omega dt)/du
  const double da_du = u * b;           // d [sin/Omega]/du
  Eigen::Matrix2cd dp;
  dp(0, 0) = dc_du - kI * detuning * da_du;
  dp(0, 1) = -kI * (a + u * da_du);
  dp(1, 0) = dp(0, 1);
  dp(1, 1) = dc_du + kI * detuning * da_du;
  return dp;
}

std::vector<QubitState> simulate_qubit(const QubitEnsembleSpec& spec, double alpha,
                                       const Control& u) {
  if (u.channels() != 1) throw ConfigError("simulate_qubit: control must have one channel");
  const TimeGrid& grid = u.grid();
  const double d = spec.detuning(alpha);
  std::vector<QubitState> path(static_cast<std::size_t>(grid.nodes()));
  path[0] = QubitState(cd(0.0, 0.0), cd(1.0, 0.0));
  for (std::int64_t m = 0; m < grid.cells(); ++m) {
    path[static_cast<std::size_t>(m) + 1] =
        pauli_step(path[static_cast<std::size_t>(m)], d, u.values()(m, 0), grid.dt());
  }
  return path;
}

double fidelity_cost(const QubitState& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw ContractViolationError("fidelity_cost: state norm " + std::to_string(norm) +
                                 " is not 1 within 1e-6");
  }
  return 1.0 - std::norm(psi[0]);
}

double max_norm_deviation(const std::vector<QubitState>& path) {
  double dev = 0.0;
  for (const auto& psi : path) dev = std::max(dev, std::abs(psi.norm() - 1.0));
  return dev;
}

std::vector<QubitState> simulate_qubit_adjoint(const QubitEnsembleSpec& spec, double alpha,
                                               const Control& u,
                                               const std::vector<QubitState>& psi) {
  const TimeGrid& grid = u.grid();
  if (psi.size() != static_cast<std::size_t>(grid.nodes())) {
    throw ConfigError("simulate_qubit_adjoint: forward path length does not match grid");
  }
  const double d = spec.detuning(alpha);
  std::vector<QubitState> chi(psi.size());
  const cd overlap = target_overlap(psi.back());
  chi.back() = QubitState(-2.0 * overlap, cd(0.0, 0.0));
  for (std::int64_t m = grid.cells() - 1; m >= 0; --m) {
    // The backward step is the inverse propagator, an exact step of -dt.
    chi[static_cast<std::size_t>(m)] =
        pauli_step(chi[static_cast<std::size_t>(m) + 1], d, u.values()(m, 0), -grid.dt());
  }
  return chi;
}

Eigen::VectorXd coupling_cells(const QubitEnsembleSpec& spec, double alpha, const Control& u,
                               const std::vector<QubitState>& psi,
                               const std::vector<QubitState>& chi) {
  const TimeGrid& grid = u.grid();
  if (psi.size() != static_cast<std::size_t>(grid.nodes()) || chi.size() != psi.size()) {
    throw ConfigError("coupling_cells: path lengths do not match grid");
  }
  const double d = spec.detuning(alpha);
  Eigen::VectorXd cells(grid.cells());
  for (std::int64_t m = 0; m < grid.cells(); ++m) {
    const Eigen::Matrix2cd dp =
        pauli_step_control_derivative(d, u.values()(m, 0), grid.dt());
    // (1/dt) Re <chi_{m+1} | dP/du | psi_m> is the exact cell average of
    // Im <chi|H1|psi>, the derivative density of -|overlap|^2.
    const QubitState w = dp * psi[static_cast<std::size_t>(m)];
    cells[m] = chi[static_cast<std::size_t>(m) + 1].dot(w).real() / grid.dt();
  }
  return cells;
}

double analytic_pulse_value(const AnalyticPulseParams& p, double energy, double t) {
  const double rate = p.eps1 * p.eps2;
  const double envelope = 2.0 * p.eps1 * (1.0 - std::cos(2.0 * std::numbers::pi * rate * t));
  const double sweep =
      (p.alpha0 - p.alpha1) * std::sin(std::numbers::pi * rate * t) / (std::numbers::pi * rate);
  const double phase = 2.0 * energy * t + sweep + (p.alpha0 + p.alpha1) * t;
  return envelope * std::cos(phase);
}

Control analytic_control(const AnalyticPulseParams& p, double energy, const TimeGrid& grid) {
  if (!(p.eps1 > 0.0) || !(p.eps2 > 0.0)) {
    throw ConfigError("analytic_control: eps1 and eps2 must be positive");
  }
  if (std::abs(grid.horizon() * p.eps1 * p.eps2 - 1.0) > 1e-9) {
    throw ConfigError("analytic_control: horizon must equal 1/(eps1*eps2)");
  }
  Eigen::MatrixXd values(grid.cells(), 1);
  for (std::int64_t m = 0; m < grid.cells(); ++m) {
    values(m, 0) = analytic_pulse_value(p, energy, grid.cell_midpoint(m));
  }
  return Control(grid, std::move(values));
}

Eigen::MatrixXd overlap_profile(const QubitEnsembleSpec& spec, const std::vector<double>& alphas,
                                const Control& u, int threads) {
  Eigen::MatrixXd profile(static_cast<Eigen::Index>(alphas.size()), 4);
  parallel_for(
      static_cast<int>(alphas.size()),
      [&](int i) {
        const auto path = simulate_qubit(spec, alphas[static_cast<std::size_t>(i)], u);
        const double abs_overlap = std::abs(target_overlap(path.back()));
        profile(i, 0) = alphas[static_cast<std::size_t>(i)];
        profile(i, 1) = abs_overlap;
        profile(i, 2) = 1.0 - abs_overlap;
        profile(i, 3) = 1.0 - abs_overlap * abs_overlap;
      },
      threads);
  return profile;
}

QubitBackend::QubitBackend(QubitEnsembleSpec spec, ParamSet alphas, int threads)
    : spec_(spec), alphas_(std::move(alphas)) {
  if (alphas_.dim() != 1) throw ConfigError("QubitBackend: parameters must be scalar");
  threads_ = threads;
}

Eigen::VectorXd QubitBackend::terminal_costs(const Control& u) const {
  if (u.channels() != 1) throw ConfigError("QubitBackend: control must have one channel");
  Eigen::VectorXd costs(alphas_.size());
  parallel_for(
      alphas_.size(),
      [&](int j) {
        const TimeGrid& grid = u.grid();
        const double d = spec_.detuning(alphas_[j][0]);
        QubitState psi(cd(0.0, 0.0), cd(1.0, 0.0));
        for (std::int64_t m = 0; m < grid.cells(); ++m) {
          psi = pauli_step(psi, d, u.values()(m, 0), grid.dt());
        }
        costs[j] = 1.0 - std::norm(target_overlap(psi));
      },
      threads_);
  return costs;
}

Eigen::MatrixXd QubitBackend::cell_coupling(const Control& u, int j) const {
  const double alpha = alphas_[j][0];
  const auto psi = simulate_qubit(spec_, alpha, u);
  const auto chi = simulate_qubit_adjoint(spec_, alpha, u, psi);
  // Hamiltonian convention: lambda . F is the negative of the cost
  // derivative, so the proximal maximization descends on the cost.
  return -coupling_cells(spec_, alpha, u, psi, chi);
}

std::vector<Eigen::MatrixXd> QubitBackend::couplings(const Control& u,
                                                     const std::vector<int>& indices) const {
  std::vector<Eigen::MatrixXd> out(indices.size());
  parallel_for(
      static_cast<int>(indices.size()),
      [&](int i) { out[static_cast<std::size_t>(i)] = cell_coupling(u, indices[static_cast<std::size_t>(i)]); },
      threads_);
  return out;
}

}  // namespace mmoc
