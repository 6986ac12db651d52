#include "mmoc/solver.hpp"

#include <cmath>

namespace mmoc {

namespace {

void validate(const SolverConfig& config, const RunningCost& f) {
  if (!(config.tau0 > 0.0) || !(config.warmstart_tau > 0.0)) {
    throw ConfigError("solver: tau0 and warmstart_tau must be positive");
  }
  if (config.max_iter < 0 || config.warmstart_iter < 0) {
    throw ConfigError("solver: iteration counts must be nonnegative");
  }
  if (!f.is_quadratic()) {
    throw ConfigError("solver: the per-cell update needs the quadratic running cost");
  }
}

void proximal_update(Eigen::MatrixXd& u, const Eigen::MatrixXd& coupling, double gamma,
                     double tau) {
  u = (coupling + tau * u) / (2.0 * gamma + tau);
}

}  // namespace

Control solve_averaged(const SolverBackend& backend, const RunningCost& f, const TimeGrid& grid,
                       const SolverConfig& config) {
  validate(config, f);
  Control u = config.initial ? *config.initial : Control::zero(grid, backend.control_dim());
  if (!(u.grid() == grid)) throw ConfigError("solve_averaged: initial control grid mismatch");
  if (u.channels() != backend.control_dim()) {
    throw ConfigError("solve_averaged: initial control channel mismatch");
  }

  std::vector<int> all(static_cast<std::size_t>(backend.params().size()));
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = static_cast<int>(j);
  const double inv_count = 1.0 / static_cast<double>(all.size());

  for (int n = 0; n < config.warmstart_iter; ++n) {
    const std::vector<Eigen::MatrixXd> couplings = backend.couplings(u, all);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(grid.cells(), backend.control_dim());
    for (const auto& b : couplings) mean += b;
    mean *= inv_count;
    proximal_update(u.values(), mean, f.gamma(), config.warmstart_tau);
  }
  return u;
}

SolveReport solve_minimax(const SolverBackend& backend, const RunningCost& f,
                          const SolverConfig& config, const Control& warm_start) {
  validate(config, f);
  const ParamSet& params = backend.params();
  Control u = warm_start;

  Eigen::VectorXd costs = backend.terminal_costs(u);
  MinimaxEval eval = assemble_minimax(costs, params, f, u);

  SolveReport report{u, 0, {}, eval.costs, eval.worst, eval.running, eval.value};
  report.trace.reserve(static_cast<std::size_t>(config.max_iter));

  for (int n = 1; n <= config.max_iter; ++n) {
    const double tau = config.tau0 + static_cast<double>(n - 1);
    const Eigen::MatrixXd coupling = backend.cell_coupling(u, eval.worst.index);
    proximal_update(u.values(), coupling, f.gamma(), tau);

    costs = backend.terminal_costs(u);
    eval = assemble_minimax(costs, params, f, u);

    IterationRecord rec;
    rec.iteration = n;
    rec.worst_index = eval.worst.index;
    rec.worst_theta = eval.worst.theta;
    rec.worst_cost = eval.worst.value;
    rec.l2_sq = control_l2_sq(u);
    rec.objective = eval.value;
    rec.tau = tau;
    report.trace.push_back(std::move(rec));

    if (eval.value < report.objective) {
      report.control = u;
      report.best_iteration = n;
      report.costs = eval.costs;
      report.worst = eval.worst;
      report.running = eval.running;
      report.objective = eval.value;
    }
  }
  return report;
}

}  // namespace mmoc
