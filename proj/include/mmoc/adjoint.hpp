#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mmoc/cost.hpp"
#include "mmoc/ensemble.hpp"

namespace mmoc {

/// Backward pass output for one parameter.
///
/// covectors:     (M+1) x d, row m is the adjoint costate lambda(t_m) of
///                lambda' = -lambda (dF0/dx + sum_i u_i dF_i/dx),
///                lambda(T) = -grad_x a(X(T, theta), theta).
/// cell_coupling: M x k, row m is the average over cell m of the Hamiltonian
///                coupling lambda(t) . F_i(X(t), theta), accumulated from the
///                RK4 stages of the backward step, so it matches the cell
///                derivative of the terminal cost to integrator order.
struct AdjointPath {
  Eigen::MatrixXd covectors;
  Eigen::MatrixXd cell_coupling;
};

/// Adjoint paths of a whole ensemble, in parameter order.
struct AdjointBundle {
  TimeGrid grid;
  std::vector<AdjointPath> paths;
};

/// Integrates the adjoint equation backward from T for one parameter with
/// RK4 steps mirroring the forward cells.  Stage states inside a cell are
/// re-integrated from the stored forward node, not interpolated.  `forward`
/// is the (M+1) x d node path of the same parameter under the same control.
AdjointPath simulate_adjoint(const EnsembleProblem& problem, const ParamPoint& theta,
                             const Control& u, const Eigen::MatrixXd& forward,
                             const TerminalCost& a, int substeps = 1);

AdjointBundle simulate_adjoint_bundle(const EnsembleProblem& problem, const ParamSet& params,
                                      const Control& u, const TrajectoryBundle& bundle,
                                      const TerminalCost& a, int substeps = 1, int threads = 0);

/// Gateaux derivative of the weighted cost
///   sum_j weights_j a(X(T, theta_j), theta_j) + integral of f
/// as a per-cell density: row m is
///   g_m = d_v f(t, u_m) - sum_j weights_j * <cell-averaged coupling of j>.
/// Matches central finite differences of the weighted cost divided by
/// (eps * dt) to integrator order.
Eigen::MatrixXd gateaux_gradient(const EnsembleProblem& problem, const ParamSet& params,
                                 const Eigen::VectorXd& weights, const Control& u,
                                 const TerminalCost& a, const RunningCost& f, int substeps = 1,
                                 int threads = 0);

}  // namespace mmoc
