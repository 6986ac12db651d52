#include "mmoc/adjoint.hpp"

#include "mmoc/parallel.hpp"

namespace mmoc {

AdjointPath simulate_adjoint(const EnsembleProblem& problem, const ParamPoint& theta,
                             const Control& u, const Eigen::MatrixXd& forward,
                             const TerminalCost& a, int substeps) {
  if (substeps < 1) throw ConfigError("simulate_adjoint: substeps must be >= 1");
  const TimeGrid& grid = u.grid();
  const int d = problem.state_dim();
  const int k = problem.control_dim();
  if (forward.rows() != grid.nodes() || forward.cols() != d) {
    throw ConfigError("simulate_adjoint: forward path shape does not match grid and problem");
  }
  const double h = grid.dt() / static_cast<double>(substeps);

  AdjointPath out;
  out.covectors.resize(grid.nodes(), d);
  out.cell_coupling.resize(grid.cells(), k);

  const Eigen::VectorXd xT = forward.row(grid.cells()).transpose();
  Eigen::RowVectorXd lam = -a.gradient(xT, theta).transpose();
  out.covectors.row(grid.cells()) = lam;

  // Forward substep states within one cell, reused by the backward stages.
  std::vector<Eigen::VectorXd> sub(static_cast<std::size_t>(substeps) + 1);
  std::vector<Eigen::VectorXd> mid(static_cast<std::size_t>(substeps));

  for (std::int64_t m = grid.cells() - 1; m >= 0; --m) {
    const Eigen::RowVectorXd um = u.cell(m);

    // Recover substep states by re-integration from the stored left node;
    // the full-cell product is bitwise the stored right node, so use it.
    sub[0] = forward.row(m).transpose();
    for (int s = 0; s < substeps; ++s) {
      const auto& xs = sub[static_cast<std::size_t>(s)];
      mid[static_cast<std::size_t>(s)] = rk4_step(problem, theta, xs, um, 0.5 * h);
      if (s + 1 == substeps) {
        sub[static_cast<std::size_t>(s) + 1] = forward.row(m + 1).transpose();
      } else {
        sub[static_cast<std::size_t>(s) + 1] = rk4_step(problem, theta, xs, um, h);
      }
    }

    Eigen::RowVectorXd coupling_sum = Eigen::RowVectorXd::Zero(k);
    for (int s = substeps - 1; s >= 0; --s) {
      const Eigen::VectorXd& x_right = sub[static_cast<std::size_t>(s) + 1];
      const Eigen::VectorXd& x_mid = mid[static_cast<std::size_t>(s)];
      const Eigen::VectorXd& x_left = sub[static_cast<std::size_t>(s)];

      const Eigen::MatrixXd a_right = problem.rhs_jacobian(x_right, theta, um);
      const Eigen::MatrixXd a_mid = problem.rhs_jacobian(x_mid, theta, um);
      const Eigen::MatrixXd a_left = problem.rhs_jacobian(x_left, theta, um);

      const double hb = -h;
      const Eigen::RowVectorXd k1 = -lam * a_right;
      const Eigen::RowVectorXd lam2 = lam + 0.5 * hb * k1;
      const Eigen::RowVectorXd k2 = -lam2 * a_mid;
      const Eigen::RowVectorXd lam3 = lam + 0.5 * hb * k2;
      const Eigen::RowVectorXd k3 = -lam3 * a_mid;
      const Eigen::RowVectorXd lam4 = lam + hb * k3;
      const Eigen::RowVectorXd k4 = -lam4 * a_left;

      // Same stages integrate the coupling density lambda(t) . F(x(t)).
      const Eigen::RowVectorXd q1 = lam * problem.control_fields(x_right, theta);
      const Eigen::RowVectorXd q2 = lam2 * problem.control_fields(x_mid, theta);
      const Eigen::RowVectorXd q3 = lam3 * problem.control_fields(x_mid, theta);
      const Eigen::RowVectorXd q4 = lam4 * problem.control_fields(x_left, theta);
      coupling_sum += (h / 6.0) * (q1 + 2.0 * q2 + 2.0 * q3 + q4);

      lam += (hb / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.covectors.row(m) = lam;
    out.cell_coupling.row(m) = coupling_sum / grid.dt();
  }
  return out;
}

AdjointBundle simulate_adjoint_bundle(const EnsembleProblem& problem, const ParamSet& params,
                                      const Control& u, const TrajectoryBundle& bundle,
                                      const TerminalCost& a, int substeps, int threads) {
  if (static_cast<int>(bundle.states.size()) != params.size()) {
    throw ConfigError("simulate_adjoint_bundle: bundle and parameter set sizes differ");
  }
  AdjointBundle out{u.grid(), std::vector<AdjointPath>(bundle.states.size())};
  parallel_for(
      params.size(),
      [&](int j) {
        out.paths[static_cast<std::size_t>(j)] = simulate_adjoint(
            problem, params[j], u, bundle.states[static_cast<std::size_t>(j)], a, substeps);
      },
      threads);
  return out;
}

Eigen::MatrixXd gateaux_gradient(const EnsembleProblem& problem, const ParamSet& params,
                                 const Eigen::VectorXd& weights, const Control& u,
                                 const TerminalCost& a, const RunningCost& f, int substeps,
                                 int threads) {
  if (weights.size() != params.size()) {
    throw ConfigError("gateaux_gradient: weight vector and parameter set sizes differ");
  }
  const TimeGrid& grid = u.grid();
  const int k = problem.control_dim();

  const TrajectoryBundle bundle = simulate_bundle(problem, params, u, substeps, threads);

  std::vector<Eigen::MatrixXd> couplings(static_cast<std::size_t>(params.size()));
  parallel_for(
      params.size(),
      [&](int j) {
        if (weights[j] == 0.0) return;
        couplings[static_cast<std::size_t>(j)] =
            simulate_adjoint(problem, params[j], u, bundle.states[static_cast<std::size_t>(j)], a,
                             substeps)
                .cell_coupling;
      },
      threads);

  Eigen::MatrixXd g(grid.cells(), k);
  for (std::int64_t m = 0; m < grid.cells(); ++m) {
    g.row(m) = f.gradient(grid.cell_midpoint(m), u.cell(m));
  }
  for (int j = 0; j < params.size(); ++j) {
    if (weights[j] == 0.0) continue;
    g -= weights[j] * couplings[static_cast<std::size_t>(j)];
  }
  return g;
}

}  // namespace mmoc
