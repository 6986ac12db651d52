#include "mmoc/sweep.hpp"

#include <cmath>

namespace mmoc {

SweepReport sweep_refinement(const QubitEnsembleSpec& spec, double alpha_lo, double alpha_hi,
                             const std::vector<int>& levels, int test_net_size,
                             const TimeGrid& grid, const RunningCost& f,
                             const SolverConfig& config, int threads) {
  if (levels.empty()) throw ConfigError("sweep_refinement: need at least one level");

  SweepReport report;
  const ParamSet test_params = make_uniform_net(NetSpec::interval(alpha_lo, alpha_hi, test_net_size));
  report.test_net.reserve(static_cast<std::size_t>(test_params.size()));
  for (int j = 0; j < test_params.size(); ++j) report.test_net.push_back(test_params[j][0]);

  for (int n : levels) {
    const NetSpec net = NetSpec::interval(alpha_lo, alpha_hi, n);
    const QubitBackend backend(spec, make_uniform_net(net), threads);

    const Control warm = solve_averaged(backend, f, grid, config);
    const SolveReport solved = solve_minimax(backend, f, config, warm);

    const Eigen::MatrixXd profile = overlap_profile(spec, report.test_net, solved.control, threads);

    SweepLevel level{n,
                     hausdorff_net_to_interval(net),
                     solved.objective,
                     profile.col(2).maxCoeff(),
                     profile.col(2).minCoeff(),
                     control_l2_sq(solved.control),
                     0.0,
                     0.0,
                     solved.control};
    report.levels.push_back(std::move(level));
  }

  const SweepLevel& finest = report.levels.back();
  for (auto& level : report.levels) {
    Control diff = level.control;
    diff.values() -= finest.control.values();
    level.dist_to_finest = control_lp_norm(diff, 2.0);
    level.l2_gap_to_finest = std::abs(level.control_l2_sq - finest.control_l2_sq);
  }
  return report;
}

}  // namespace mmoc
