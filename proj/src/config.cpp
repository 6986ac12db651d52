#include "mmoc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"
#include "mmoc/errors.hpp"

namespace mmoc {
namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key: " + key);
  if (!j[key].is_number()) throw ConfigError("key must be a number: " + key);
  return j[key].get<double>();
}

int require_int(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing key: " + key);
  if (!j[key].is_number_integer()) throw ConfigError("key must be an integer: " + key);
  return j[key].get<int>();
}

void check_finite(double v, const std::string& key) {
  if (!std::isfinite(v)) throw ConfigError("key must be finite: " + key);
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object: " + path);

  static const std::set<std::string> known = {
      "problem",       "E",          "alpha_lo",       "alpha_hi",      "gamma",
      "T",             "dt",         "net_size",       "test_net_size", "tau0",
      "max_iter",      "warmstart_iter", "warmstart_tau", "initial_control",
      "eps1",          "eps2",       "levels",         "output_dir",    "substeps"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ConfigError("unknown config key: " + item.key());
  }

  RunConfig cfg;
  if (j.contains("problem")) {
    if (!j["problem"].is_string()) throw ConfigError("key must be a string: problem");
    cfg.problem = j["problem"].get<std::string>();
  }
  cfg.energy = j.contains("E") ? require_number(j, "E") : cfg.energy;
  cfg.alpha_lo = require_number(j, "alpha_lo");
  cfg.alpha_hi = require_number(j, "alpha_hi");
  cfg.gamma = require_number(j, "gamma");
  cfg.horizon = require_number(j, "T");
  cfg.dt = require_number(j, "dt");
  cfg.net_size = require_int(j, "net_size");
  cfg.test_net_size = require_int(j, "test_net_size");
  cfg.tau0 = require_number(j, "tau0");
  cfg.max_iter = require_int(j, "max_iter");
  cfg.warmstart_iter = require_int(j, "warmstart_iter");
  cfg.warmstart_tau = require_number(j, "warmstart_tau");
  if (j.contains("initial_control")) cfg.initial_control = require_number(j, "initial_control");
  if (j.contains("eps1")) cfg.eps1 = require_number(j, "eps1");
  if (j.contains("eps2")) cfg.eps2 = require_number(j, "eps2");
  if (j.contains("levels")) {
    if (!j["levels"].is_array() || j["levels"].empty()) {
      throw ConfigError("levels must be a non-empty array of integers");
    }
    cfg.levels.clear();
    for (const auto& v : j["levels"]) {
      if (!v.is_number_integer()) throw ConfigError("levels must contain integers");
      cfg.levels.push_back(v.get<int>());
    }
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("key must be a string: output_dir");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("substeps")) cfg.substeps = require_int(j, "substeps");

  validate_config(cfg);
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.problem != "qubit" && cfg.problem != "pendulum") {
    throw ConfigError("problem must be 'qubit' or 'pendulum', got '" + cfg.problem + "'");
  }
  check_finite(cfg.energy, "E");
  check_finite(cfg.alpha_lo, "alpha_lo");
  check_finite(cfg.alpha_hi, "alpha_hi");
  if (!(cfg.alpha_lo < cfg.alpha_hi)) throw ConfigError("alpha_lo must be below alpha_hi");
  if (!(cfg.gamma > 0.0) || !std::isfinite(cfg.gamma)) throw ConfigError("gamma must be positive");
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw ConfigError("T must be positive");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be positive");
  if (cfg.dt > cfg.horizon) throw ConfigError("dt must not exceed T");
  if (cfg.net_size < 2) throw ConfigError("net_size must be at least 2");
  if (cfg.test_net_size < 2) throw ConfigError("test_net_size must be at least 2");
  if (!(cfg.tau0 > 0.0) || !std::isfinite(cfg.tau0)) throw ConfigError("tau0 must be positive");
  if (cfg.max_iter < 0) throw ConfigError("max_iter must be non-negative");
  if (cfg.warmstart_iter < 0) throw ConfigError("warmstart_iter must be non-negative");
  if (!(cfg.warmstart_tau > 0.0) || !std::isfinite(cfg.warmstart_tau)) {
    throw ConfigError("warmstart_tau must be positive");
  }
  check_finite(cfg.initial_control, "initial_control");
  if (cfg.eps1 && (!(*cfg.eps1 > 0.0) || !std::isfinite(*cfg.eps1))) {
    throw ConfigError("eps1 must be positive");
  }
  if (cfg.eps2 && (!(*cfg.eps2 > 0.0) || !std::isfinite(*cfg.eps2))) {
    throw ConfigError("eps2 must be positive");
  }
  for (int n : cfg.levels) {
    if (n < 2) throw ConfigError("levels entries must be at least 2");
  }
  if (cfg.substeps < 1) throw ConfigError("substeps must be at least 1");
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["problem"] = cfg.problem;
  j["E"] = cfg.energy;
  j["alpha_lo"] = cfg.alpha_lo;
  j["alpha_hi"] = cfg.alpha_hi;
  j["gamma"] = cfg.gamma;
  j["T"] = cfg.horizon;
  j["dt"] = cfg.dt;
  j["net_size"] = cfg.net_size;
  j["test_net_size"] = cfg.test_net_size;
  j["tau0"] = cfg.tau0;
  j["max_iter"] = cfg.max_iter;
  j["warmstart_iter"] = cfg.warmstart_iter;
  j["warmstart_tau"] = cfg.warmstart_tau;
  j["initial_control"] = cfg.initial_control;
  if (cfg.eps1) j["eps1"] = *cfg.eps1;
  if (cfg.eps2) j["eps2"] = *cfg.eps2;
  j["levels"] = cfg.levels;
  j["output_dir"] = cfg.output_dir;
  j["substeps"] = cfg.substeps;
  return j.dump(2);
}

}  // namespace mmoc
