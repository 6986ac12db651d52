#include "mmoc/ensemble.hpp"

#include <string>

#include "mmoc/parallel.hpp"

namespace mmoc {

Eigen::VectorXd rk4_step(const EnsembleProblem& problem, const ParamPoint& theta,
                         const Eigen::VectorXd& x, const Eigen::RowVectorXd& u, double h) {
  const Eigen::VectorXd k1 = problem.rhs(x, theta, u);
  const Eigen::VectorXd k2 = problem.rhs(x + 0.5 * h * k1, theta, u);
  const Eigen::VectorXd k3 = problem.rhs(x + 0.5 * h * k2, theta, u);
  const Eigen::VectorXd k4 = problem.rhs(x + h * k3, theta, u);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::MatrixXd simulate_trajectory(const EnsembleProblem& problem, const ParamPoint& theta,
                                    const Control& u, int substeps) {
  if (substeps < 1) throw ConfigError("simulate_trajectory: substeps must be >= 1");
  if (u.channels() != problem.control_dim()) {
    throw ConfigError("simulate_trajectory: control channel count does not match problem");
  }
  const TimeGrid& grid = u.grid();
  const double h = grid.dt() / static_cast<double>(substeps);
  const int d = problem.state_dim();

  Eigen::MatrixXd path(grid.nodes(), d);
  Eigen::VectorXd x = problem.initial_state(theta);
  if (x.size() != d) throw ContractViolationError("initial_state returned wrong dimension");
  path.row(0) = x.transpose();

  for (std::int64_t m = 0; m < grid.cells(); ++m) {
    const Eigen::RowVectorXd um = u.cell(m);
    for (int s = 0; s < substeps; ++s) {
      x = rk4_step(problem, theta, x, um, h);
    }
    if (!x.allFinite()) {
      throw IntegrationDivergedError(
          "simulate_trajectory: non-finite state after cell " + std::to_string(m),
          static_cast<int>(m));
    }
    path.row(m + 1) = x.transpose();
  }
  return path;
}

TrajectoryBundle simulate_bundle(const EnsembleProblem& problem, const ParamSet& params,
                                 const Control& u, int substeps, int threads) {
  TrajectoryBundle bundle{u.grid(), std::vector<Eigen::MatrixXd>(params.size())};
  parallel_for(
      params.size(),
      [&](int j) { bundle.states[static_cast<std::size_t>(j)] = simulate_trajectory(problem, params[j], u, substeps); },
      threads);
  return bundle;
}

bool bound_check(const TrajectoryBundle& bundle, double radius) {
  for (const auto& path : bundle.states) {
    for (Eigen::Index r = 0; r < path.rows(); ++r) {
      if (path.row(r).norm() > radius) return false;
    }
  }
  return true;
}

}  // namespace mmoc
