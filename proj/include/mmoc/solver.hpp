#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mmoc/backend.hpp"
#include "mmoc/control.hpp"
#include "mmoc/cost.hpp"
#include "mmoc/pmp.hpp"

namespace mmoc {

/// Knobs of the two-phase solve.  The running cost (and its gamma) travels
/// separately as a RunningCost, which must be quadratic for the closed-form
/// cell update.
struct SolverConfig {
  double tau0 = 8.0;          // inverse step size at the first minimax iteration
  int max_iter = 1000;        // minimax iterations; 0 evaluates the input only
  int warmstart_iter = 400;   // averaged iterations before the minimax phase
  double warmstart_tau = 4.0; // fixed inverse step size of the averaged phase
  std::optional<Control> initial;  // seed of the averaged phase; zero if absent
};

/// One minimax iteration, describing the post-update iterate: its worst
/// parameter, cost values, and the tau that produced it.
struct IterationRecord {
  int iteration = 0;   // 1-based
  int worst_index = 0;
  ParamPoint worst_theta;
  double worst_cost = 0.0;  // max_j a(X(T, theta_j), theta_j)
  double l2_sq = 0.0;       // squared L2 norm of the control
  double objective = 0.0;   // worst_cost + running integral
  double tau = 0.0;         // inverse step size used by the update
};

struct SolveReport {
  Control control;                     // iterate with the smallest objective
  int best_iteration = 0;              // 0 means the warm-start input itself
  std::vector<IterationRecord> trace;  // one record per minimax iteration
  Eigen::VectorXd costs;               // per-parameter terminal costs at `control`
  WorstCase worst;
  double running = 0.0;
  double objective = 0.0;
};

/// Averaged warm start: `warmstart_iter` proximal updates against the mean
/// coupling over the whole ensemble, at fixed inverse step size.
Control solve_averaged(const SolverBackend& backend, const RunningCost& f, const TimeGrid& grid,
                       const SolverConfig& config);

/// Worst-case phase.  Iteration n simulates the ensemble, picks the worst
/// parameter (smallest index on ties), integrates its adjoint, and applies
/// the per-cell proximal update with tau = tau0 + (n - 1).  The reported
/// control is the iterate with the smallest objective encountered, the
/// warm start included.
SolveReport solve_minimax(const SolverBackend& backend, const RunningCost& f,
                          const SolverConfig& config, const Control& warm_start);

}  // namespace mmoc
