#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmoc/pmp.hpp"
#include "mmoc/solver.hpp"
#include "mmoc/sweep.hpp"

namespace mmoc {

/// Worst/best figures measured on the finer audit net.
struct TestNetSummary {
  int size = 0;
  double max_infidelity = 0.0;
  double min_infidelity = 0.0;
  double max_cost_sq = 0.0;
  double worst_alpha = 0.0;
};

/// Summarizes a K x 4 profile matrix (columns alpha, |overlap|, infidelity,
/// cost) as produced by overlap_profile.
TestNetSummary summarize_profile(const Eigen::MatrixXd& profile);

/// trace.csv: iter,worst_alpha,worst_cost_sq,worst_infidelity,l2_sq,J,tau.
void write_trace_csv(const std::string& path, const std::vector<IterationRecord>& trace);

/// profile.csv: alpha,overlap,infidelity,cost_sq from a K x 4 profile matrix.
void write_profile_csv(const std::string& path, const Eigen::MatrixXd& profile);

/// sweep.csv: N,max_infidelity,min_infidelity,control_l2_sq.
void write_sweep_csv(const std::string& path, const SweepReport& report);

/// multiplier.csv: alpha,weight over the whole net (inactive points carry 0).
void write_multiplier_csv(const std::string& path, const std::vector<double>& alphas,
                          const Eigen::VectorXd& weights);

/// report.json for a solve run; config_echo is the JSON text of the config.
std::string solve_report_json(const std::string& config_echo, const SolveReport& report,
                              const std::vector<double>& net_alphas,
                              const std::optional<TestNetSummary>& test_net);

/// sweep.json with one record per refinement level.
std::string sweep_report_json(const std::string& config_echo, const SweepReport& report);

/// pmp_summary.json for a stationarity check.
std::string pmp_summary_json(const PMPReport& report, const std::vector<double>& alphas);

}  // namespace mmoc
