#pragma once

#include <string>
#include <vector>

#include "mmoc/control.hpp"

namespace mmoc {

/// Shortest decimal form that parses back to the same double bit pattern.
std::string format_double(double v);

/// Parses a full double field; throws ConfigError on trailing garbage.
double parse_double(const std::string& field);

/// Writes content to path atomically: a sibling temp file is renamed over
/// the destination, so readers never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

/// CSV with a header row; every cell already formatted.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Reads a CSV with a header; returns rows of string cells.
std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               std::vector<std::string>* header = nullptr);

/// control.csv: columns t,u (or t,u0..uK for several channels), one row per
/// cell, t the cell start time.  Values round-trip bitwise.
void write_control_csv(const std::string& path, const Control& u);

/// Loads a control written by write_control_csv onto the expected grid.
/// Row count or node times off the grid raise ConfigError.
Control read_control_csv(const std::string& path, const TimeGrid& grid);

}  // namespace mmoc
