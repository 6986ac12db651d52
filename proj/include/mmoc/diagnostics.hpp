#pragma once

#include <cstdint>

#include "mmoc/backend.hpp"
#include "mmoc/cost.hpp"

namespace mmoc {

/// Outcome of comparing the adjoint gradient against central differences.
struct GradCheckResult {
  double max_rel_error = 0.0;  ///< worst relative mismatch over all samples
  double tolerance = 1e-5;
  int trials = 0;
  bool pass = false;
};

/// Samples `trials` random (control, parameter, cell) triples and compares
/// the adjoint-based derivative of  cost_j(u) + integral of f  against a
/// central finite difference in the sampled cell coefficient.  Relative
/// errors use an absolute floor of 1e-8 so near-zero derivatives do not
/// inflate the ratio.  Deterministic for a fixed seed.
GradCheckResult grad_check(SolverBackend& backend, const RunningCost& f, const TimeGrid& grid,
                           int trials, std::uint64_t seed, double fd_eps = 1e-5,
                           double tolerance = 1e-5);

}  // namespace mmoc
