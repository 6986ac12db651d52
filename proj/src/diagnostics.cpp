#include "mmoc/diagnostics.hpp"

#include <cmath>
#include <random>

#include "mmoc/errors.hpp"

namespace mmoc {

GradCheckResult grad_check(SolverBackend& backend, const RunningCost& f, const TimeGrid& grid,
                           int trials, std::uint64_t seed, double fd_eps, double tolerance) {
  if (trials < 1) throw ConfigError("grad_check: trials must be positive");
  const int cells = grid.cells();
  const int channels = backend.control_dim();
  const int n_params = static_cast<int>(backend.params().size());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> pick_cell(0, cells - 1);
  std::uniform_int_distribution<int> pick_param(0, n_params - 1);
  std::uniform_int_distribution<int> pick_channel(0, channels - 1);

  auto weighted_cost = [&](const Control& u, int j) {
    return backend.terminal_costs(u)[j] + f.integral(u);
  };

  GradCheckResult result;
  result.tolerance = tolerance;
  result.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    Control u = Control::zero(grid, channels);
    for (int m = 0; m < cells; ++m) {
      for (int k = 0; k < channels; ++k) u.values()(m, k) = amp(rng);
    }
    const int j = pick_param(rng);
    const int m = pick_cell(rng);
    const int k = pick_channel(rng);

    const Eigen::MatrixXd coupling = backend.cell_coupling(u, j);
    const Eigen::VectorXd df = f.gradient(grid.cell_midpoint(m), u.cell(m));
    const double analytic = df[k] - coupling(m, k);

    Control up = u, um = u;
    up.values()(m, k) += fd_eps;
    um.values()(m, k) -= fd_eps;
    const double fd = (weighted_cost(up, j) - weighted_cost(um, j)) / (2.0 * fd_eps * grid.dt());

    const double scale = std::max({1e-8, std::abs(analytic), std::abs(fd)});
    result.max_rel_error = std::max(result.max_rel_error, std::abs(analytic - fd) / scale);
  }
  result.pass = result.max_rel_error <= tolerance;
  return result;
}

}  // namespace mmoc
