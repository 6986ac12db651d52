#include "mmoc/pmp.hpp"

#include <algorithm>
#include <cmath>

namespace mmoc {

Eigen::RowVectorXd aug_hamiltonian_argmax(const Eigen::RowVectorXd& b,
                                          const Eigen::RowVectorXd& u_prev, double gamma,
                                          double tau) {
  if (!(gamma > 0.0) || !(tau >= 0.0)) {
    throw ConfigError("aug_hamiltonian_argmax: need gamma > 0 and tau >= 0");
  }
  if (b.size() != u_prev.size()) {
    throw ConfigError("aug_hamiltonian_argmax: dimension mismatch");
  }
  return (b + tau * u_prev) / (2.0 * gamma + tau);
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw ConfigError("project_simplex: empty vector");
  std::vector<double> s(v.data(), v.data() + n);
  std::sort(s.begin(), s.end(), std::greater<double>());
  double cumulative = 0.0;
  double cumulative_at_rho = s[0];
  int rho = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += s[static_cast<std::size_t>(i)];
    if (s[static_cast<std::size_t>(i)] - (cumulative - 1.0) / static_cast<double>(i + 1) > 0.0) {
      rho = static_cast<int>(i) + 1;
      cumulative_at_rho = cumulative;
    }
  }
  const double shift = (cumulative_at_rho - 1.0) / static_cast<double>(rho);
  return (v.array() - shift).cwiseMax(0.0);
}

namespace {

constexpr int kProjectedGradientIters = 2000;
constexpr int kPowerIters = 100;

// Least squares of sum_j w_j b_j against the target in the discrete L2 inner
// product, with w on the simplex.
Eigen::VectorXd simplex_least_squares(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = gram.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (n == 1) return w;

  // Largest eigenvalue of the Gram matrix by power iteration; the gradient of
  // |B w - d|^2 is 2 (G w - c), so its Lipschitz constant is 2 lambda_max.
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  for (int it = 0; it < kPowerIters; ++it) {
    Eigen::VectorXd gv = gram * v;
    const double norm = gv.norm();
    if (norm == 0.0) break;
    v = gv / norm;
    lambda = v.dot(gram * v);
  }
  if (!(lambda > 0.0)) return w;  // zero couplings: any simplex point is optimal

  const double step = 1.0 / (2.0 * lambda);
  for (int it = 0; it < kProjectedGradientIters; ++it) {
    const Eigen::VectorXd grad = 2.0 * (gram * w - rhs);
    w = project_simplex(w - step * grad);
  }
  return w;
}

}  // namespace

MultiplierEstimate estimate_multiplier(const SolverBackend& backend, const Control& u,
                                       const RunningCost& f, double activation_tol) {
  const Eigen::VectorXd costs = backend.terminal_costs(u);
  const double max_cost = costs.maxCoeff();
  if (activation_tol < 0.0) activation_tol = 1e-3 * max_cost;

  std::vector<int> active;
  for (int j = 0; j < costs.size(); ++j) {
    if (costs[j] >= max_cost - activation_tol) active.push_back(j);
  }

  const std::vector<Eigen::MatrixXd> couplings = backend.couplings(u, active);

  const TimeGrid& grid = u.grid();
  const double dt = grid.dt();
  Eigen::MatrixXd target(grid.cells(), backend.control_dim());
  for (std::int64_t m = 0; m < grid.cells(); ++m) {
    target.row(m) = f.gradient(grid.cell_midpoint(m), u.cell(m));
  }

  const auto n = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& bi = couplings[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i; j < n; ++j) {
      gram(i, j) = gram(j, i) = dt * bi.cwiseProduct(couplings[static_cast<std::size_t>(j)]).sum();
    }
    rhs[i] = dt * bi.cwiseProduct(target).sum();
  }

  const Eigen::VectorXd w_active = simplex_least_squares(gram, rhs);

  MultiplierEstimate est;
  est.weights = Eigen::VectorXd::Zero(costs.size());
  est.active_indices = active;
  Eigen::MatrixXd fit = Eigen::MatrixXd::Zero(grid.cells(), backend.control_dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    est.weights[active[static_cast<std::size_t>(i)]] = w_active[i];
    fit += w_active[i] * couplings[static_cast<std::size_t>(i)];
  }
  const double target_norm = std::sqrt(dt * target.squaredNorm());
  est.residual = std::sqrt(dt * (fit - target).squaredNorm()) / std::max(1.0, target_norm);
  return est;
}

PMPReport pmp_check(const SolverBackend& backend, const Control& u, const RunningCost& f,
                    double activation_tol, double residual_tol) {
  PMPReport report;
  report.residual_tol = residual_tol;
  report.multiplier = estimate_multiplier(backend, u, f, activation_tol);

  const Eigen::VectorXd costs = backend.terminal_costs(u);
  double lo = costs[report.multiplier.active_indices.front()];
  double hi = lo;
  for (int j : report.multiplier.active_indices) {
    lo = std::min(lo, costs[j]);
    hi = std::max(hi, costs[j]);
  }
  report.support_slack = hi - lo;

  const std::vector<Eigen::MatrixXd> couplings =
      backend.couplings(u, report.multiplier.active_indices);
  const TimeGrid& grid = u.grid();
  Eigen::MatrixXd fit = Eigen::MatrixXd::Zero(grid.cells(), backend.control_dim());
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    fit += report.multiplier.weights[report.multiplier.active_indices[i]] * couplings[i];
  }
  report.residual_profile.resize(grid.cells());
  for (std::int64_t m = 0; m < grid.cells(); ++m) {
    report.residual_profile[m] =
        (fit.row(m) - f.gradient(grid.cell_midpoint(m), u.cell(m))).norm();
  }
  report.pass = report.multiplier.residual <= residual_tol;
  return report;
}

}  // namespace mmoc
