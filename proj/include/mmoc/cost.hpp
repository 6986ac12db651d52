#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "mmoc/control.hpp"
#include "mmoc/ensemble.hpp"
#include "mmoc/errors.hpp"
#include "mmoc/params.hpp"

namespace mmoc {

/// Terminal cost a(x, theta).  Implementations must be nonnegative and C^1 in
/// x; the gradient feeds the adjoint terminal condition.
class TerminalCost {
 public:
  virtual ~TerminalCost() = default;
  virtual double value(const Eigen::VectorXd& x, const ParamPoint& theta) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x, const ParamPoint& theta) const = 0;
};

/// Convex running cost f(t, v).  The quadratic kind gamma * |v|^2 is the one
/// used by the shipped studies and admits exact cell quadrature; the custom
/// kind carries callables and an optional subgradient oracle.
class RunningCost {
 public:
  using ValueFn = std::function<double(double, const Eigen::RowVectorXd&)>;
  using GradFn = std::function<Eigen::RowVectorXd(double, const Eigen::RowVectorXd&)>;

  static RunningCost quadratic(double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("RunningCost: gamma must be > 0");
    RunningCost f;
    f.gamma_ = gamma;
    return f;
  }

  static RunningCost custom(ValueFn value, std::optional<GradFn> grad = std::nullopt) {
    RunningCost f;
    f.value_ = std::move(value);
    f.grad_ = std::move(grad);
    return f;
  }

  bool is_quadratic() const { return !value_; }
  double gamma() const { return gamma_; }

  double value(double t, const Eigen::RowVectorXd& v) const {
    if (is_quadratic()) return gamma_ * v.squaredNorm();
    return value_(t, v);
  }

  /// Subgradient in v.  Throws NonsmoothCostError for a custom cost without
  /// a gradient oracle.
  Eigen::RowVectorXd gradient(double t, const Eigen::RowVectorXd& v) const {
    if (is_quadratic()) return 2.0 * gamma_ * v;
    if (!grad_) throw NonsmoothCostError("RunningCost: no subgradient oracle provided");
    return (*grad_)(t, v);
  }

  /// Integral over [0, T] for a piecewise-constant control, by exact cell
  /// quadrature (custom costs are sampled at cell midpoints).
  double integral(const Control& u) const {
    if (is_quadratic()) return gamma_ * control_l2_sq(u);
    double acc = 0.0;
    for (std::int64_t m = 0; m < u.grid().cells(); ++m) {
      acc += value(u.grid().cell_midpoint(m), u.cell(m)) * u.grid().dt();
    }
    return acc * 1.0;
  }

 private:
  RunningCost() = default;
  double gamma_ = 0.0;
  ValueFn value_;
  std::optional<GradFn> grad_;
};

/// Result of a worst-case scan: value, index, and the parameter itself.
/// Ties go to the smallest index.
struct WorstCase {
  int index = 0;
  double value = 0.0;
  ParamPoint theta;
};

/// Terminal costs of every bundle member, in parameter order.  A negative
/// value beyond roundoff (< -1e-12) violates the nonnegativity contract and
/// throws; values in [-1e-12, 0) are clamped to zero.
Eigen::VectorXd terminal_costs(const TrajectoryBundle& bundle, const ParamSet& params,
                               const TerminalCost& a);

/// Largest entry with smallest-index tie-break.
WorstCase worst_case(const Eigen::VectorXd& costs, const ParamSet& params);

struct MinimaxEval {
  Eigen::VectorXd costs;
  WorstCase worst;
  double running = 0.0;
  double value = 0.0;
};

MinimaxEval assemble_minimax(const Eigen::VectorXd& costs, const ParamSet& params,
                             const RunningCost& f, const Control& u);

/// J^N(u) = max_j a(X_u(T, theta_j), theta_j) + integral of f.
double eval_minimax(const EnsembleProblem& problem, const ParamSet& params, const Control& u,
                    const TerminalCost& a, const RunningCost& f, int substeps = 1,
                    int threads = 0);

/// Same with the mean over parameters instead of the max.
double eval_averaged(const EnsembleProblem& problem, const ParamSet& params, const Control& u,
                     const TerminalCost& a, const RunningCost& f, int substeps = 1,
                     int threads = 0);

}  // namespace mmoc
