#include "mmoc/report.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "mmoc/csv_io.hpp"
#include "mmoc/errors.hpp"

namespace mmoc {
namespace {

using nlohmann::json;

std::string theta_cell(const Eigen::VectorXd& theta) {
  std::string s;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (i) s += ';';
    s += format_double(theta[i]);
  }
  return s;
}

double infidelity_from_cost(double cost_sq) {
  return 1.0 - std::sqrt(std::max(0.0, 1.0 - cost_sq));
}

}  // namespace

TestNetSummary summarize_profile(const Eigen::MatrixXd& profile) {
  if (profile.cols() != 4 || profile.rows() < 1) {
    throw Error("summarize_profile: expected a K x 4 matrix");
  }
  TestNetSummary s;
  s.size = static_cast<int>(profile.rows());
  Eigen::Index worst = 0;
  profile.col(3).maxCoeff(&worst);
  s.max_infidelity = profile.col(2).maxCoeff();
  s.min_infidelity = profile.col(2).minCoeff();
  s.max_cost_sq = profile(worst, 3);
  s.worst_alpha = profile(worst, 0);
  return s;
}

void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace) {
  std::vector<std::string> header = {"iter",  "worst_alpha",      "worst_cost_sq",
                                     "worst_infidelity", "l2_sq", "J",
                                     "tau"};
  std::vector<std::vector<std::string>> rows;
  rows.reserve(trace.size());
  for (const auto& rec : trace) {
    rows.push_back({std::to_string(rec.iteration), theta_cell(rec.worst_theta),
                    format_double(rec.worst_cost), format_double(infidelity_from_cost(rec.worst_cost)),
                    format_double(rec.l2_sq), format_double(rec.objective), format_double(rec.tau)});
  }
  write_csv(path, header, rows);
}

void write_profile_csv(const std::string& path, const Eigen::MatrixXd& profile) {
  if (profile.cols() != 4) throw Error("write_profile_csv: expected a K x 4 matrix");
  std::vector<std::string> header = {"alpha", "overlap", "infidelity", "cost_sq"};
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(profile.rows()));
  for (Eigen::Index k = 0; k < profile.rows(); ++k) {
    rows.push_back({format_double(profile(k, 0)), format_double(profile(k, 1)),
                    format_double(profile(k, 2)), format_double(profile(k, 3))});
  }
  write_csv(path, header, rows);
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
  std::vector<std::string> header = {"N", "max_infidelity", "min_infidelity", "control_l2_sq"};
  std::vector<std::vector<std::string>> rows;
  rows.reserve(report.levels.size());
  for (const auto& lvl : report.levels) {
    rows.push_back({std::to_string(lvl.net_size), format_double(lvl.max_infidelity),
                    format_double(lvl.min_infidelity), format_double(lvl.control_l2_sq)});
  }
  write_csv(path, header, rows);
}

void write_multiplier_csv(const std::string& path, const std::vector<double>& alphas,
                          const Eigen::VectorXd& weights) {
  if (static_cast<Eigen::Index>(alphas.size()) != weights.size()) {
    throw Error("write_multiplier_csv: alpha/weight length mismatch");
  }
  std::vector<std::string> header = {"alpha", "weight"};
  std::vector<std::vector<std::string>> rows;
  rows.reserve(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    rows.push_back({format_double(alphas[i]), format_double(weights[static_cast<Eigen::Index>(i)])});
  }
  write_csv(path, header, rows);
}

std::string solve_report_json(const std::string& config_echo, const SolveReport& report,
                              const std::vector<double>& net_alphas,
                              const std::optional<TestNetSummary>& test_net) {
  json j;
  j["config"] = json::parse(config_echo);
  j["best_iteration"] = report.best_iteration;
  j["objective"] = report.objective;
  j["running_cost"] = report.running;
  j["control_l2_sq"] = control_l2_sq(report.control);
  json worst;
  worst["index"] = report.worst.index;
  worst["alpha"] = report.worst.theta.size() == 1 ? json(report.worst.theta[0])
                                                  : json(std::vector<double>(
                                                        report.worst.theta.data(),
                                                        report.worst.theta.data() + report.worst.theta.size()));
  worst["cost_sq"] = report.worst.value;
  worst["infidelity"] = 1.0 - std::sqrt(std::max(0.0, 1.0 - report.worst.value));
  j["worst"] = worst;
  j["net_alphas"] = net_alphas;
  j["net_costs"] = std::vector<double>(report.costs.data(), report.costs.data() + report.costs.size());
  j["iterations"] = report.trace.size();
  if (test_net) {
    json tn;
    tn["size"] = test_net->size;
    tn["max_infidelity"] = test_net->max_infidelity;
    tn["min_infidelity"] = test_net->min_infidelity;
    tn["max_cost_sq"] = test_net->max_cost_sq;
    tn["worst_alpha"] = test_net->worst_alpha;
    j["test_net"] = tn;
  }
  return j.dump(2);
}

std::string sweep_report_json(const std::string& config_echo, const SweepReport& report) {
  json j;
  j["config"] = json::parse(config_echo);
  j["test_net_size"] = report.test_net.size();
  json levels = json::array();
  for (const auto& lvl : report.levels) {
    json l;
    l["N"] = lvl.net_size;
    l["eps"] = lvl.eps;
    l["objective"] = lvl.objective;
    l["max_infidelity"] = lvl.max_infidelity;
    l["min_infidelity"] = lvl.min_infidelity;
    l["control_l2_sq"] = lvl.control_l2_sq;
    l["dist_to_finest"] = lvl.dist_to_finest;
    l["l2_gap_to_finest"] = lvl.l2_gap_to_finest;
    levels.push_back(l);
  }
  j["levels"] = levels;
  return j.dump(2);
}

std::string pmp_summary_json(const PMPReport& report, const std::vector<double>& alphas) {
  json j;
  j["residual"] = report.multiplier.residual;
  j["residual_tol"] = report.residual_tol;
  j["support_slack"] = report.support_slack;
  j["pass"] = report.pass;
  j["active_count"] = report.multiplier.active_indices.size();
  j["weight_sum"] = report.multiplier.weights.sum();
  json support = json::array();
  for (int idx : report.multiplier.active_indices) {
    json entry;
    entry["index"] = idx;
    entry["alpha"] = alphas.at(static_cast<std::size_t>(idx));
    entry["weight"] = report.multiplier.weights[idx];
    support.push_back(entry);
  }
  j["support"] = support;
  return j.dump(2);
}

}  // namespace mmoc
