#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "mmoc/errors.hpp"

namespace mmoc {

// A single parameter value in R^l.
using ParamPoint = Eigen::VectorXd;

// Axis-aligned box in parameter space.
struct ParamBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

// Ordered finite set of parameter points, all of one dimension, without
// duplicates.  The order is part of the value: worst-case ties are broken by
// the smallest index, so reorderings are observable.
class ParamSet {
 public:
  explicit ParamSet(std::vector<ParamPoint> points, std::optional<ParamBox> box = std::nullopt)
      : points_(std::move(points)), box_(std::move(box)) {
    if (points_.empty()) throw ConfigError("ParamSet: empty point list");
    const auto dim = points_[0].size();
    for (const auto& p : points_) {
      if (p.size() != dim) throw ConfigError("ParamSet: mixed point dimensions");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
      for (std::size_t j = i + 1; j < points_.size(); ++j) {
        if (points_[i] == points_[j]) {
          throw ConfigError("ParamSet: duplicate point at indices " + std::to_string(i) +
                            " and " + std::to_string(j));
        }
      }
    }
    if (box_) {
      if (box_->lo.size() != dim || box_->hi.size() != dim) {
        throw ConfigError("ParamSet: box dimension mismatch");
      }
      for (const auto& p : points_) {
        if ((p.array() < box_->lo.array()).any() || (p.array() > box_->hi.array()).any()) {
          throw ConfigError("ParamSet: point outside ambient box");
        }
      }
    }
  }

  // Scalar-parameter convenience.
  static ParamSet from_scalars(const std::vector<double>& values,
                               std::optional<std::pair<double, double>> box = std::nullopt) {
    std::vector<ParamPoint> pts;
    pts.reserve(values.size());
    for (double v : values) {
      ParamPoint p(1);
      p[0] = v;
      pts.push_back(std::move(p));
    }
    std::optional<ParamBox> b;
    if (box) {
      ParamBox pb;
      pb.lo = Eigen::VectorXd::Constant(1, box->first);
      pb.hi = Eigen::VectorXd::Constant(1, box->second);
      b = std::move(pb);
    }
    return ParamSet(std::move(pts), std::move(b));
  }

  int size() const { return static_cast<int>(points_.size()); }
  Eigen::Index dim() const { return points_[0].size(); }
  const ParamPoint& operator[](int i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::vector<ParamPoint>& points() const { return points_; }
  const std::optional<ParamBox>& box() const { return box_; }

 private:
  std::vector<ParamPoint> points_;
  std::optional<ParamBox> box_;
};

}  // namespace mmoc
