#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>

#include "mmoc/cost.hpp"
#include "mmoc/ensemble.hpp"

namespace mmoc {

// EnsembleProblem assembled from callables; used for small test fixtures and
// one-off experiments.
class CallbackProblem : public EnsembleProblem {
 public:
  using StateFn = std::function<Eigen::VectorXd(const ParamPoint&)>;
  using FieldFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, const ParamPoint&)>;
  using MatrixFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&, const ParamPoint&)>;
  using ChannelMatrixFn =
      std::function<Eigen::MatrixXd(int, const Eigen::VectorXd&, const ParamPoint&)>;

  CallbackProblem(int state_dim, int control_dim, StateFn x0, FieldFn drift, MatrixFn fields,
                  MatrixFn drift_jac, ChannelMatrixFn field_jac)
      : d_(state_dim),
        k_(control_dim),
        x0_(std::move(x0)),
        drift_(std::move(drift)),
        fields_(std::move(fields)),
        drift_jac_(std::move(drift_jac)),
        field_jac_(std::move(field_jac)) {}

  int state_dim() const override { return d_; }
  int control_dim() const override { return k_; }
  Eigen::VectorXd initial_state(const ParamPoint& th) const override { return x0_(th); }
  Eigen::VectorXd drift(const Eigen::VectorXd& x, const ParamPoint& th) const override {
    return drift_(x, th);
  }
  Eigen::MatrixXd control_fields(const Eigen::VectorXd& x, const ParamPoint& th) const override {
    return fields_(x, th);
  }
  Eigen::MatrixXd drift_jacobian(const Eigen::VectorXd& x, const ParamPoint& th) const override {
    return drift_jac_(x, th);
  }
  Eigen::MatrixXd field_jacobian(int i, const Eigen::VectorXd& x,
                                 const ParamPoint& th) const override {
    return field_jac_(i, x, th);
  }

 private:
  int d_;
  int k_;
  StateFn x0_;
  FieldFn drift_;
  MatrixFn fields_;
  MatrixFn drift_jac_;
  ChannelMatrixFn field_jac_;
};

// Damped driven pendulum with a state-dependent actuation gain.  The scalar
// parameter is the damping coefficient; it also shifts the initial angle and
// the target angle, so that different parameters genuinely disagree about the
// optimal control.  Smooth in everything, which makes it the workhorse for
// gradient and convergence checks.
//
//   x1' = x2
//   x2' = -sin(x1) - theta * x2 + (1 + cos(x1)/2) * u
class PendulumProblem : public EnsembleProblem {
 public:
  int state_dim() const override { return 2; }
  int control_dim() const override { return 1; }

  Eigen::VectorXd initial_state(const ParamPoint& th) const override {
    Eigen::VectorXd x(2);
    x << 0.2 + 0.1 * th[0], 0.0;
    return x;
  }

  Eigen::VectorXd drift(const Eigen::VectorXd& x, const ParamPoint& th) const override {
    Eigen::VectorXd f(2);
    f << x[1], -std::sin(x[0]) - th[0] * x[1];
    return f;
  }

  Eigen::MatrixXd control_fields(const Eigen::VectorXd& x, const ParamPoint&) const override {
    Eigen::MatrixXd g(2, 1);
    g << 0.0, 1.0 + 0.5 * std::cos(x[0]);
    return g;
  }

  Eigen::MatrixXd drift_jacobian(const Eigen::VectorXd& x, const ParamPoint& th) const override {
    Eigen::MatrixXd j(2, 2);
    j << 0.0, 1.0, -std::cos(x[0]), -th[0];
    return j;
  }

  Eigen::MatrixXd field_jacobian(int, const Eigen::VectorXd& x, const ParamPoint&) const override {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
    j(1, 0) = -0.5 * std::sin(x[0]);
    return j;
  }
};

// a(x) = |x - target|^2: steer the terminal state to a fixed point.  The
// pendulum studies use the rest state at the origin.
class QuadraticDistanceCost : public TerminalCost {
 public:
  explicit QuadraticDistanceCost(Eigen::VectorXd target) : target_(std::move(target)) {}

  double value(const Eigen::VectorXd& x, const ParamPoint&) const override {
    return (x - target_).squaredNorm();
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x, const ParamPoint&) const override {
    return 2.0 * (x - target_);
  }

 private:
  Eigen::VectorXd target_;
};

}  // namespace mmoc
