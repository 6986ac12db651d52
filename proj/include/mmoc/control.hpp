#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mmoc/errors.hpp"
#include "mmoc/time_grid.hpp"

namespace mmoc {

// Piecewise-constant control: row m holds the value on cell [m*dt, (m+1)*dt).
class Control {
 public:
  Control(TimeGrid grid, Eigen::MatrixXd values) : grid_(grid), values_(std::move(values)) {
    if (values_.rows() != grid_.cells() || values_.cols() < 1) {
      throw ConfigError("Control: value matrix must be M x k with k >= 1");
    }
  }

  static Control zero(const TimeGrid& grid, int channels = 1) {
    return Control(grid, Eigen::MatrixXd::Zero(grid.cells(), channels));
  }

  static Control constant(const TimeGrid& grid, double value, int channels = 1) {
    return Control(grid, Eigen::MatrixXd::Constant(grid.cells(), channels, value));
  }

  const TimeGrid& grid() const { return grid_; }
  int cells() const { return static_cast<int>(values_.rows()); }
  int channels() const { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }
  Eigen::RowVectorXd cell(std::int64_t m) const { return values_.row(m); }

  bool operator==(const Control& other) const {
    return grid_ == other.grid_ && values_ == other.values_;
  }

 private:
  TimeGrid grid_;
  Eigen::MatrixXd values_;
};

// Exact L^p norm of a piecewise-constant control:
// ( sum_m |u_m|_2^p * dt )^(1/p), with the Euclidean norm across channels.
inline double control_lp_norm(const Control& u, double p) {
  if (!(p >= 1.0)) throw ConfigError("control_lp_norm: need p >= 1");
  const double dt = u.grid().dt();
  double acc = 0.0;
  for (std::int64_t m = 0; m < u.grid().cells(); ++m) {
    acc += std::pow(u.cell(m).norm(), p) * dt;
  }
  return std::pow(acc, 1.0 / p);
}

// Squared L^2 norm, the quantity reported alongside worst-case costs.
inline double control_l2_sq(const Control& u) {
  const double dt = u.grid().dt();
  return u.values().squaredNorm() * dt;
}

}  // namespace mmoc
