#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "mmoc/backend.hpp"
#include "mmoc/control.hpp"
#include "mmoc/cost.hpp"
#include "mmoc/ensemble.hpp"

namespace mmoc {

/// Two-level system driven through an uncertain level splitting:
///
///   i psi' = (H0 + H1 u(t)) psi,  H0 = diag(E + alpha, -(E + alpha)),
///   H1 = sigma_x,  psi(0) = (0, 1)^T,
///
/// steered toward the excited state (1, 0)^T.  alpha is the scalar ensemble
/// parameter; E is the nominal half-splitting.
struct QubitEnsembleSpec {
  double energy = 1.0;

  double detuning(double alpha) const { return energy + alpha; }
};

using QubitState = Eigen::Vector2cd;

/// Exact propagator step exp(-i dt (d sigma_z + u sigma_x)) applied to psi.
/// With Omega = hypot(d, u) this is
///   cos(Omega dt) I - i sin(Omega dt) (d sigma_z + u sigma_x) / Omega,
/// and the identity when Omega = 0.  Exactly unitary up to roundoff.
QubitState pauli_step(const QubitState& psi, double detuning, double u, double dt);

/// Derivative of the propagator matrix with respect to the control value.
/// Closed form with a series branch near Omega dt = 0; together with the
/// stored node states it yields the exact discrete cost gradient.
Eigen::Matrix2cd pauli_step_control_derivative(double detuning, double u, double dt);

/// Forward node states, psi(0) = (0, 1)^T, one exact step per cell.
std::vector<QubitState> simulate_qubit(const QubitEnsembleSpec& spec, double alpha,
                                       const Control& u);

/// <psi_tar | psi> for the fixed target (1, 0)^T, i.e. the first component.
inline std::complex<double> target_overlap(const QubitState& psi) { return psi[0]; }

/// Terminal cost 1 - |<psi_tar|psi>|^2.  The state must be normalized within
/// 1e-6 or a contract violation is thrown.
double fidelity_cost(const QubitState& psi);

/// max_m | |psi_m| - 1 |, the unitarity drift along a node path.
double max_norm_deviation(const std::vector<QubitState>& path);

/// Adjoint node states of i chi' = (H0 + H1 u) chi integrated backward from
/// chi(T) = -2 <psi_tar|psi(T)> psi_tar, by the same exact steps, so
/// |chi(t)| = 2 |<psi_tar|psi(T)>| for all t.
std::vector<QubitState> simulate_qubit_adjoint(const QubitEnsembleSpec& spec, double alpha,
                                               const Control& u,
                                               const std::vector<QubitState>& psi);

/// Im <chi|H1|psi> at one instant, the coupling density whose cell averages
/// reproduce the derivative of -|<psi_tar|psi(T)>|^2 in each cell value.
inline double pointwise_coupling(const QubitState& chi, const QubitState& psi) {
  return (std::conj(chi[0]) * psi[1] + std::conj(chi[1]) * psi[0]).imag();
}

/// Exact cell averages of the coupling density Im <chi|H1|psi>: entry m is
/// (1/dt) d/du_m of -|<psi_tar|psi(T)>|^2, evaluated through the propagator
/// derivative, so finite differences of the overlap match it to roundoff.
Eigen::VectorXd coupling_cells(const QubitEnsembleSpec& spec, double alpha, const Control& u,
                               const std::vector<QubitState>& psi,
                               const std::vector<QubitState>& chi);

/// Open-loop pulse that tracks the instantaneous splitting while sweeping a
/// phase between the two ensemble endpoints alpha0 and alpha1:
///   u(t) = 2 e1 (1 - cos(2 pi e1 e2 t))
///          * cos(2 E t + (a0 - a1) sin(pi e1 e2 t) / (pi e1 e2) + (a0 + a1) t).
/// Defined on horizons with T = 1 / (e1 e2).
struct AnalyticPulseParams {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
};

double analytic_pulse_value(const AnalyticPulseParams& p, double energy, double t);

/// Samples the pulse at cell midpoints.  Requires grid.horizon() to equal
/// 1 / (eps1 eps2) within 1e-9.
Control analytic_control(const AnalyticPulseParams& p, double energy, const TimeGrid& grid);

/// Per-alpha terminal diagnostics under one control: column 0 alpha, column 1
/// |overlap|, column 2 infidelity 1 - |overlap|, column 3 cost 1 - |overlap|^2.
Eigen::MatrixXd overlap_profile(const QubitEnsembleSpec& spec, const std::vector<double>& alphas,
                                const Control& u, int threads = 0);

/// Native solver backend: exact propagator steps forward and backward and the
/// exact per-cell coupling rows (the coupling sign matches the generic
/// adjoint convention lambda . F, the negative of the cost derivative).
class QubitBackend : public SolverBackend {
 public:
  QubitBackend(QubitEnsembleSpec spec, ParamSet alphas, int threads = 0);

  int control_dim() const override { return 1; }
  const ParamSet& params() const override { return alphas_; }
  const QubitEnsembleSpec& spec() const { return spec_; }

  Eigen::VectorXd terminal_costs(const Control& u) const override;
  Eigen::MatrixXd cell_coupling(const Control& u, int j) const override;
  std::vector<Eigen::MatrixXd> couplings(const Control& u,
                                         const std::vector<int>& indices) const override;

 private:
  QubitEnsembleSpec spec_;
  ParamSet alphas_;
};

/// The same dynamics as a four-dimensional real ensemble problem over
/// x = (Re psi_1, Im psi_1, Re psi_2, Im psi_2), for cross-checks of the
/// generic RK4 and adjoint paths against the exact ones.
class QubitEmbeddingProblem : public EnsembleProblem {
 public:
  explicit QubitEmbeddingProblem(double energy) : energy_(energy) {}

  int state_dim() const override { return 4; }
  int control_dim() const override { return 1; }

  Eigen::VectorXd initial_state(const ParamPoint&) const override {
    Eigen::VectorXd x(4);
    x << 0.0, 0.0, 1.0, 0.0;
    return x;
  }

  Eigen::VectorXd drift(const Eigen::VectorXd& x, const ParamPoint& th) const override {
    const double d = energy_ + th[0];
    Eigen::VectorXd f(4);
    f << d * x[1], -d * x[0], -d * x[3], d * x[2];
    return f;
  }

  Eigen::MatrixXd control_fields(const Eigen::VectorXd& x, const ParamPoint&) const override {
    Eigen::MatrixXd g(4, 1);
    g << x[3], -x[2], x[1], -x[0];
    return g;
  }

  Eigen::MatrixXd drift_jacobian(const Eigen::VectorXd&, const ParamPoint& th) const override {
    const double d = energy_ + th[0];
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
    j(0, 1) = d;
    j(1, 0) = -d;
    j(2, 3) = -d;
    j(3, 2) = d;
    return j;
  }

  Eigen::MatrixXd field_jacobian(int, const Eigen::VectorXd&, const ParamPoint&) const override {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
    j(0, 3) = 1.0;
    j(1, 2) = -1.0;
    j(2, 1) = 1.0;
    j(3, 0) = -1.0;
    return j;
  }

 private:
  double energy_;
};

/// 1 - (x_0^2 + x_1^2), the embedded fidelity cost.
class QubitEmbeddingCost : public TerminalCost {
 public:
  double value(const Eigen::VectorXd& x, const ParamPoint&) const override {
    return 1.0 - (x[0] * x[0] + x[1] * x[1]);
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x, const ParamPoint&) const override {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    g[0] = -2.0 * x[0];
    g[1] = -2.0 * x[1];
    return g;
  }
};

}  // namespace mmoc
