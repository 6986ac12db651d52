#pragma once

#include <stdexcept>
#include <string>

namespace mmoc {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or malformed input (bad grids, nets, files, CLI args).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A trajectory left the representable range (non-finite state).
class IntegrationDivergedError : public Error {
 public:
  IntegrationDivergedError(const std::string& what, int cell) : Error(what), cell_(cell) {}
  int cell() const { return cell_; }

 private:
  int cell_;
};

// A mathematical contract of a user-supplied callback was breached at runtime,
// e.g. a terminal cost returning a negative value.
class ContractViolationError : public Error {
 public:
  explicit ContractViolationError(const std::string& what) : Error(what) {}
};

// A running cost without a subgradient oracle was asked for one.
class NonsmoothCostError : public Error {
 public:
  explicit NonsmoothCostError(const std::string& what) : Error(what) {}
};

}  // namespace mmoc
