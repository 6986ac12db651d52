#include "mmoc/cost.hpp"

#include <string>

namespace mmoc {

namespace {
// Tolerance separating roundoff from a genuine nonnegativity breach.
constexpr double kNegativeCostTol = 1e-12;
}  // namespace

Eigen::VectorXd terminal_costs(const TrajectoryBundle& bundle, const ParamSet& params,
                               const TerminalCost& a) {
  if (static_cast<int>(bundle.states.size()) != params.size()) {
    throw ConfigError("terminal_costs: bundle and parameter set sizes differ");
  }
  Eigen::VectorXd costs(params.size());
  for (int j = 0; j < params.size(); ++j) {
    const auto& path = bundle.states[static_cast<std::size_t>(j)];
    const Eigen::VectorXd xT = path.row(path.rows() - 1).transpose();
    double value = a.value(xT, params[j]);
    if (value < 0.0) {
      if (value < -kNegativeCostTol) {
        throw ContractViolationError("terminal cost returned " + std::to_string(value) +
                                     " for parameter index " + std::to_string(j) +
                                     "; terminal costs must be nonnegative");
      }
      value = 0.0;
    }
    costs[j] = value;
  }
  return costs;
}

WorstCase worst_case(const Eigen::VectorXd& costs, const ParamSet& params) {
  if (costs.size() != params.size()) {
    throw ConfigError("worst_case: cost vector and parameter set sizes differ");
  }
  WorstCase w;
  w.index = 0;
  w.value = costs[0];
  for (int j = 1; j < costs.size(); ++j) {
    if (costs[j] > w.value) {
      w.value = costs[j];
      w.index = j;
    }
  }
  w.theta = params[w.index];
  return w;
}

MinimaxEval assemble_minimax(const Eigen::VectorXd& costs, const ParamSet& params,
                             const RunningCost& f, const Control& u) {
  MinimaxEval e;
  e.costs = costs;
  e.worst = worst_case(costs, params);
  e.running = f.integral(u);
  e.value = e.worst.value + e.running;
  return e;
}

double eval_minimax(const EnsembleProblem& problem, const ParamSet& params, const Control& u,
                    const TerminalCost& a, const RunningCost& f, int substeps, int threads) {
  const TrajectoryBundle bundle = simulate_bundle(problem, params, u, substeps, threads);
  const Eigen::VectorXd costs = terminal_costs(bundle, params, a);
  return assemble_minimax(costs, params, f, u).value;
}

double eval_averaged(const EnsembleProblem& problem, const ParamSet& params, const Control& u,
                     const TerminalCost& a, const RunningCost& f, int substeps, int threads) {
  const TrajectoryBundle bundle = simulate_bundle(problem, params, u, substeps, threads);
  const Eigen::VectorXd costs = terminal_costs(bundle, params, a);
  return costs.mean() + f.integral(u);
}

}  // namespace mmoc
