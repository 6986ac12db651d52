#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "mmoc/errors.hpp"

namespace mmoc {

// Uniform time grid on [0, T] with M cells of width dt.  Controls are
// piecewise constant on cells; states live on the M+1 nodes.
class TimeGrid {
 public:
  TimeGrid(double horizon, double dt, std::int64_t cells) : T_(horizon), dt_(dt), M_(cells) {
    if (!(horizon > 0.0) || !(dt > 0.0) || cells < 1) {
      throw ConfigError("TimeGrid: need T > 0, dt > 0, M >= 1");
    }
    // M * dt must reproduce T up to rounding of the product.
    const double prod = static_cast<double>(cells) * dt;
    const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(horizon, prod);
    if (std::abs(prod - horizon) > tol) {
      throw ConfigError("TimeGrid: M * dt does not match T");
    }
  }

  static TimeGrid from_step(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0)) {
      throw ConfigError("TimeGrid: need T > 0 and dt > 0");
    }
    const auto cells = static_cast<std::int64_t>(std::llround(horizon / dt));
    return TimeGrid(horizon, dt, cells);
  }

  static TimeGrid from_cells(double horizon, std::int64_t cells) {
    if (!(horizon > 0.0) || cells < 1) {
      throw ConfigError("TimeGrid: need T > 0 and M >= 1");
    }
    return TimeGrid(horizon, horizon / static_cast<double>(cells), cells);
  }

  double horizon() const { return T_; }
  double dt() const { return dt_; }
  std::int64_t cells() const { return M_; }
  std::int64_t nodes() const { return M_ + 1; }

  double node_time(std::int64_t m) const { return static_cast<double>(m) * dt_; }
  double cell_midpoint(std::int64_t m) const { return (static_cast<double>(m) + 0.5) * dt_; }

  bool operator==(const TimeGrid& other) const {
    return T_ == other.T_ && dt_ == other.dt_ && M_ == other.M_;
  }

 private:
  double T_;
  double dt_;
  std::int64_t M_;
};

}  // namespace mmoc
