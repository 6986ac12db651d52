#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mmoc {

/// One study read from a JSON file.  All numeric fields are validated on
/// load; an invalid or malformed file raises ConfigError.
struct RunConfig {
  std::string problem = "qubit";  ///< "qubit" or "pendulum"

  // Ensemble definition.
  double energy = 1.0;  ///< qubit only: nominal level splitting E
  double alpha_lo = -0.5;
  double alpha_hi = 0.5;

  // Cost and horizon.
  double gamma = 0.0625;
  double horizon = 20.0;
  double dt = 0.03125;

  // Discretizations of the parameter interval.
  int net_size = 101;        ///< optimization net
  int test_net_size = 1001;  ///< finer audit net for reported profiles

  // Iteration schedule.
  double tau0 = 8.0;
  int max_iter = 1000;
  int warmstart_iter = 400;
  double warmstart_tau = 4.0;

  /// Constant value filling the initial control guess.  The default 0 is a
  /// stationary point of the update on the qubit (zero overlap gives a zero
  /// coupling), so studies that should move ship a nonzero value.
  double initial_control = 0.0;

  // Reference pulse parameters (optional; required by the analytic command).
  std::optional<double> eps1;
  std::optional<double> eps2;

  /// Net sizes for the refinement sweep; defaults to {26, 51, 101}.
  std::vector<int> levels{26, 51, 101};

  std::string output_dir = ".";
  int substeps = 1;  ///< RK4 substeps per cell for generic problems
};

/// Parses and validates a config file.
RunConfig load_config(const std::string& path);

/// Validates an in-memory config; throws ConfigError with the offending key.
void validate_config(const RunConfig& cfg);

/// Serializes the config back to a JSON string (echoed into reports).
std::string config_to_json(const RunConfig& cfg);

}  // namespace mmoc
