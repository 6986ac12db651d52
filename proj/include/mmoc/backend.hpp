#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mmoc/adjoint.hpp"
#include "mmoc/cost.hpp"
#include "mmoc/ensemble.hpp"

namespace mmoc {

/// What the solver and the stationarity diagnostics need from a problem:
/// terminal costs across the ensemble and, per parameter, the cell-averaged
/// Hamiltonian coupling rows b_j(m) = lambda(t) . F(X(t), theta_j) entering
/// the per-cell control update.  Implementations must be deterministic for a
/// fixed control regardless of thread count.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;

  virtual int control_dim() const = 0;
  virtual const ParamSet& params() const = 0;

  /// a(X_u(T, theta_j), theta_j) for every j, in parameter order.
  virtual Eigen::VectorXd terminal_costs(const Control& u) const = 0;

  /// M x k coupling rows for parameter j under control u.
  virtual Eigen::MatrixXd cell_coupling(const Control& u, int j) const = 0;

  /// Batched couplings for a set of parameter indices.
  virtual std::vector<Eigen::MatrixXd> couplings(const Control& u,
                                                 const std::vector<int>& indices) const;

 protected:
  int threads_ = 0;
};

/// Generic backend: RK4 forward trajectories, backward adjoint with
/// re-integrated stage states.  Holds references only; keep the problem,
/// parameter set and cost alive for the backend's lifetime.
class Rk4Backend : public SolverBackend {
 public:
  Rk4Backend(const EnsembleProblem& problem, const ParamSet& params, const TerminalCost& a,
             int substeps = 1, int threads = 0)
      : problem_(problem), params_(params), a_(a), substeps_(substeps) {
    threads_ = threads;
  }

  int control_dim() const override { return problem_.control_dim(); }
  const ParamSet& params() const override { return params_; }

  Eigen::VectorXd terminal_costs(const Control& u) const override {
    return mmoc::terminal_costs(simulate_bundle(problem_, params_, u, substeps_, threads_),
                                params_, a_);
  }

  Eigen::MatrixXd cell_coupling(const Control& u, int j) const override {
    const Eigen::MatrixXd forward = simulate_trajectory(problem_, params_[j], u, substeps_);
    return simulate_adjoint(problem_, params_[j], u, forward, a_, substeps_).cell_coupling;
  }

 private:
  const EnsembleProblem& problem_;
  const ParamSet& params_;
  const TerminalCost& a_;
  int substeps_;
};

}  // namespace mmoc
