#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mmoc/control.hpp"
#include "mmoc/errors.hpp"
#include "mmoc/params.hpp"
#include "mmoc/time_grid.hpp"

namespace mmoc {

/// Control-affine parametric dynamics
///
///   x'(t) = F0(x, theta) + sum_i F_i(x, theta) u_i(t),   x(0) = x0(theta),
///
/// shared by every member of a parameter ensemble.  Implementations supply
/// the drift F0, the control fields F_i (as columns of a d x k matrix), the
/// initial state, and the state Jacobians of all fields; the Jacobians drive
/// the adjoint integration and are cross-checked against finite differences
/// in the test suite.
class EnsembleProblem {
 public:
  virtual ~EnsembleProblem() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;

  virtual Eigen::VectorXd initial_state(const ParamPoint& theta) const = 0;

  /// F0(x, theta), size d.
  virtual Eigen::VectorXd drift(const Eigen::VectorXd& x, const ParamPoint& theta) const = 0;

  /// Columns are F_1(x, theta) .. F_k(x, theta), size d x k.
  virtual Eigen::MatrixXd control_fields(const Eigen::VectorXd& x,
                                         const ParamPoint& theta) const = 0;

  /// dF0/dx, size d x d.
  virtual Eigen::MatrixXd drift_jacobian(const Eigen::VectorXd& x,
                                         const ParamPoint& theta) const = 0;

  /// dF_i/dx for channel i, size d x d.
  virtual Eigen::MatrixXd field_jacobian(int channel, const Eigen::VectorXd& x,
                                         const ParamPoint& theta) const = 0;

  /// Right-hand side for a frozen control value.
  Eigen::VectorXd rhs(const Eigen::VectorXd& x, const ParamPoint& theta,
                      const Eigen::RowVectorXd& u) const {
    return drift(x, theta) + control_fields(x, theta) * u.transpose();
  }

  /// State Jacobian of the right-hand side for a frozen control value.
  Eigen::MatrixXd rhs_jacobian(const Eigen::VectorXd& x, const ParamPoint& theta,
                               const Eigen::RowVectorXd& u) const {
    Eigen::MatrixXd jac = drift_jacobian(x, theta);
    for (int i = 0; i < control_dim(); ++i) {
      jac += u[i] * field_jacobian(i, x, theta);
    }
    return jac;
  }
};

/// Forward trajectories of a whole ensemble on a shared grid.  states[j] has
/// one row per grid node (M+1 rows, d columns) for parameter j.
struct TrajectoryBundle {
  TimeGrid grid;
  std::vector<Eigen::MatrixXd> states;
};

/// One classical RK4 step of size h for the frozen-control right-hand side.
Eigen::VectorXd rk4_step(const EnsembleProblem& problem, const ParamPoint& theta,
                         const Eigen::VectorXd& x, const Eigen::RowVectorXd& u, double h);

/// Integrates one parameter with fixed-step RK4 aligned to control cells.
/// Each cell is advanced with `substeps` equal RK4 steps (default 1).
/// Returns the (M+1) x d node states.  Throws IntegrationDivergedError with
/// the offending cell index if the state leaves the representable range.
Eigen::MatrixXd simulate_trajectory(const EnsembleProblem& problem, const ParamPoint& theta,
                                    const Control& u, int substeps = 1);

/// Integrates every parameter of the set.  Per-parameter work may run on
/// several threads; results are bitwise independent of the schedule.
TrajectoryBundle simulate_bundle(const EnsembleProblem& problem, const ParamSet& params,
                                 const Control& u, int substeps = 1, int threads = 0);

/// True iff every node state of every member satisfies |x|_2 <= radius.
bool bound_check(const TrajectoryBundle& bundle, double radius);

}  // namespace mmoc
