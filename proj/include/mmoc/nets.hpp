#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mmoc/cost.hpp"
#include "mmoc/ensemble.hpp"
#include "mmoc/params.hpp"

namespace mmoc {

/// Uniform tensor grid over an axis-aligned box.  One entry per axis; every
/// axis needs at least two points so that the endpoints are included.
struct NetSpec {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  std::vector<int> points_per_axis;

  static NetSpec interval(double lo, double hi, int points);
};

/// Builds the grid with bitwise-exact endpoints: coordinate i of an axis is
/// lo * (1 - t) + hi * t at t = i / (N - 1).  Doubling a net to 2N - 1 points
/// reproduces the parent coordinates bitwise, so refinements nest exactly.
/// Points are ordered lexicographically, first axis slowest.
ParamSet make_uniform_net(const NetSpec& spec);

/// Exact Hausdorff distance between two finite sets (Euclidean metric).
double hausdorff_finite(const ParamSet& a, const ParamSet& b);

/// Hausdorff distance between a uniform net and its ambient box: half the
/// cell diagonal, which for an interval is spacing / 2.
double hausdorff_net_to_interval(const NetSpec& spec);

/// Indices of the coarse points inside the fine set (exact equality), or
/// nullopt if some coarse point is missing.
std::optional<std::vector<int>> subset_indices(const ParamSet& coarse, const ParamSet& fine);

/// True iff coarse is a subset of fine (exact equality) and the minimax value
/// over the coarse net does not exceed the fine one beyond 1e-12.  Both sides
/// are evaluated from one shared trajectory bundle on the fine net.
bool nestedness_audit(const EnsembleProblem& problem, const ParamSet& coarse,
                      const ParamSet& fine, const Control& u, const TerminalCost& a,
                      const RunningCost& f, int substeps = 1, int threads = 0);

}  // namespace mmoc
