#pragma once

#include <vector>

#include "mmoc/control.hpp"
#include "mmoc/nets.hpp"
#include "mmoc/qubit.hpp"
#include "mmoc/solver.hpp"

namespace mmoc {

/// One refinement level of the net sweep.
struct SweepLevel {
  int net_size = 0;
  double eps = 0.0;              // Hausdorff distance of the net to the interval
  double objective = 0.0;        // minimized worst-case objective on the level net
  double max_infidelity = 0.0;   // over the shared test net
  double min_infidelity = 0.0;   // over the shared test net
  double control_l2_sq = 0.0;
  double dist_to_finest = 0.0;   // L2 distance of the control to the finest level's
  double l2_gap_to_finest = 0.0; // | l2_sq - finest l2_sq |
  Control control;
};

struct SweepReport {
  std::vector<SweepLevel> levels;
  std::vector<double> test_net;  // alphas of the shared evaluation net
};

/// Runs the full two-phase solve once per net level over [alpha_lo, alpha_hi]
/// and evaluates every minimizer on one shared uniform test net.  Distances
/// are measured against the finest (last) level.
SweepReport sweep_refinement(const QubitEnsembleSpec& spec, double alpha_lo, double alpha_hi,
                             const std::vector<int>& levels, int test_net_size,
                             const TimeGrid& grid, const RunningCost& f,
                             const SolverConfig& config, int threads = 0);

}  // namespace mmoc
