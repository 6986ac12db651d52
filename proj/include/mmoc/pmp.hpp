#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mmoc/backend.hpp"
#include "mmoc/control.hpp"
#include "mmoc/cost.hpp"

namespace mmoc {

/// Closed-form maximizer of the proximally regularized cell objective
///   v  ->  b . v - gamma |v|^2 - (tau/2) |v - u_prev|^2,
/// namely (b + tau * u_prev) / (2 gamma + tau).  Requires gamma > 0, tau >= 0.
Eigen::RowVectorXd aug_hamiltonian_argmax(const Eigen::RowVectorXd& b,
                                          const Eigen::RowVectorXd& u_prev, double gamma,
                                          double tau);

/// Euclidean projection onto the probability simplex { w >= 0, sum w = 1 }.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v);

struct MultiplierEstimate {
  Eigen::VectorXd weights;          // full length, zero off the active set
  std::vector<int> active_indices;  // indices within activation_tol of the max cost
  double residual = 0.0;            // relative L2 stationarity residual
};

/// Estimates the worst-case multiplier: restricts to parameters whose
/// terminal cost is within activation_tol of the maximum, then solves the
/// simplex-constrained least-squares fit of sum_j w_j b_j to d_v f(., u) in
/// the discrete L2 inner product, by projected gradient (2000 iterations,
/// step 1/L with L from power iteration on the Gram matrix).
/// Pass activation_tol < 0 for the default 1e-3 * (max terminal cost).
MultiplierEstimate estimate_multiplier(const SolverBackend& backend, const Control& u,
                                       const RunningCost& f, double activation_tol = -1.0);

struct PMPReport {
  MultiplierEstimate multiplier;
  Eigen::VectorXd residual_profile;  // per cell: |sum_j w_j b_j(m) - d_v f(t_m, u_m)|_2
  double support_slack = 0.0;        // max minus min terminal cost over the active set
  double residual_tol = 0.0;
  bool pass = false;
};

/// Checks the discrete stationarity system on a candidate control: estimates
/// the multiplier, reports the per-cell residual profile and the support
/// slack, and passes iff the relative residual is within residual_tol.
PMPReport pmp_check(const SolverBackend& backend, const Control& u, const RunningCost& f,
                    double activation_tol = -1.0, double residual_tol = 0.1);

}  // namespace mmoc
