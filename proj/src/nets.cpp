#include "mmoc/nets.hpp"

#include <cmath>

namespace mmoc {

NetSpec NetSpec::interval(double lo_v, double hi_v, int points) {
  NetSpec s;
  s.lo = Eigen::VectorXd::Constant(1, lo_v);
  s.hi = Eigen::VectorXd::Constant(1, hi_v);
  s.points_per_axis = {points};
  return s;
}

namespace {

void validate(const NetSpec& spec) {
  const auto axes = static_cast<std::size_t>(spec.lo.size());
  if (axes == 0 || spec.hi.size() != spec.lo.size() ||
      spec.points_per_axis.size() != axes) {
    throw ConfigError("NetSpec: lo, hi and points_per_axis must agree in dimension");
  }
  for (std::size_t i = 0; i < axes; ++i) {
    if (!(spec.lo[static_cast<Eigen::Index>(i)] < spec.hi[static_cast<Eigen::Index>(i)])) {
      throw ConfigError("NetSpec: need lo < hi on every axis");
    }
    if (spec.points_per_axis[i] < 2) {
      throw ConfigError("NetSpec: need at least two points per axis");
    }
  }
}

double axis_coordinate(double lo, double hi, int i, int n) {
  const double t = static_cast<double>(i) / static_cast<double>(n - 1);
  return lo * (1.0 - t) + hi * t;
}

}  // namespace

ParamSet make_uniform_net(const NetSpec& spec) {
  validate(spec);
  const auto axes = static_cast<int>(spec.lo.size());
  std::int64_t total = 1;
  for (int a = 0; a < axes; ++a) total *= spec.points_per_axis[static_cast<std::size_t>(a)];

  std::vector<ParamPoint> points;
  points.reserve(static_cast<std::size_t>(total));
  std::vector<int> idx(static_cast<std::size_t>(axes), 0);
  for (std::int64_t flat = 0; flat < total; ++flat) {
    ParamPoint p(axes);
    for (int a = 0; a < axes; ++a) {
      p[a] = axis_coordinate(spec.lo[a], spec.hi[a], idx[static_cast<std::size_t>(a)],
                             spec.points_per_axis[static_cast<std::size_t>(a)]);
    }
    points.push_back(std::move(p));
    for (int a = axes - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < spec.points_per_axis[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
  return ParamSet(std::move(points), ParamBox{spec.lo, spec.hi});
}

double hausdorff_finite(const ParamSet& a, const ParamSet& b) {
  if (a.dim() != b.dim()) throw ConfigError("hausdorff_finite: dimension mismatch");
  double result = 0.0;
  const auto one_sided = [&](const ParamSet& from, const ParamSet& to) {
    double sup = 0.0;
    for (int i = 0; i < from.size(); ++i) {
      double inf = (from[i] - to[0]).norm();
      for (int j = 1; j < to.size(); ++j) {
        inf = std::min(inf, (from[i] - to[j]).norm());
      }
      sup = std::max(sup, inf);
    }
    return sup;
  };
  result = std::max(one_sided(a, b), one_sided(b, a));
  return result;
}

double hausdorff_net_to_interval(const NetSpec& spec) {
  validate(spec);
  double sq = 0.0;
  for (Eigen::Index a = 0; a < spec.lo.size(); ++a) {
    const double spacing = (spec.hi[a] - spec.lo[a]) /
                           static_cast<double>(spec.points_per_axis[static_cast<std::size_t>(a)] - 1);
    sq += 0.25 * spacing * spacing;
  }
  return std::sqrt(sq);
}

std::optional<std::vector<int>> subset_indices(const ParamSet& coarse, const ParamSet& fine) {
  if (coarse.dim() != fine.dim()) return std::nullopt;
  std::vector<int> map;
  map.reserve(static_cast<std::size_t>(coarse.size()));
  for (int i = 0; i < coarse.size(); ++i) {
    int found = -1;
    for (int j = 0; j < fine.size(); ++j) {
      if (coarse[i] == fine[j]) {
        found = j;
        break;
      }
    }
    if (found < 0) return std::nullopt;
    map.push_back(found);
  }
  return map;
}

bool nestedness_audit(const EnsembleProblem& problem, const ParamSet& coarse,
                      const ParamSet& fine, const Control& u, const TerminalCost& a,
                      const RunningCost& f, int substeps, int threads) {
  const auto map = subset_indices(coarse, fine);
  if (!map) return false;

  const TrajectoryBundle bundle = simulate_bundle(problem, fine, u, substeps, threads);
  const Eigen::VectorXd fine_costs = terminal_costs(bundle, fine, a);
  double coarse_max = fine_costs[(*map)[0]];
  for (int j : *map) coarse_max = std::max(coarse_max, fine_costs[j]);
  // Shared bundle: the running term cancels, only the maxima differ.
  return coarse_max <= fine_costs.maxCoeff() + 1e-12;
}

}  // namespace mmoc
