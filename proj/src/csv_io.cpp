#include "mmoc/csv_io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mmoc/errors.hpp"

namespace mmoc {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw Error("format_double: to_chars failed");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("not a number: '" + field + "'");
  }
  return v;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("rename failed for " + path + ": " + std::strerror(errno));
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << header[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw Error("csv row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  }
  atomic_write_file(path, out.str());
}

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               std::vector<std::string>* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (first) {
      if (header) *header = cells;
      first = false;
    } else {
      rows.push_back(std::move(cells));
    }
  }
  if (first) throw ConfigError("empty csv: " + path);
  return rows;
}

void write_control_csv(const std::string& path, const Control& u) {
  std::vector<std::string> header;
  header.push_back("t");
  if (u.channels() == 1) {
    header.push_back("u");
  } else {
    for (int k = 0; k < u.channels(); ++k) header.push_back("u" + std::to_string(k));
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(static_cast<std::size_t>(u.cells()));
  for (int m = 0; m < u.cells(); ++m) {
    std::vector<std::string> row;
    row.push_back(format_double(u.grid().node_time(m)));
    for (int k = 0; k < u.channels(); ++k) row.push_back(format_double(u.values()(m, k)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

Control read_control_csv(const std::string& path, const TimeGrid& grid) {
  std::vector<std::string> header;
  auto rows = read_csv(path, &header);
  if (header.size() < 2 || header[0] != "t") {
    throw ConfigError(path + ": expected header t,u...");
  }
  const int channels = static_cast<int>(header.size()) - 1;
  if (static_cast<int>(rows.size()) != grid.cells()) {
    throw ConfigError(path + ": has " + std::to_string(rows.size()) + " cells, grid expects " +
                      std::to_string(grid.cells()));
  }
  Control u = Control::zero(grid, channels);
  const double tol = 1e-9 * std::max(1.0, grid.horizon());
  for (int m = 0; m < grid.cells(); ++m) {
    const auto& row = rows[static_cast<std::size_t>(m)];
    if (static_cast<int>(row.size()) != channels + 1) {
      throw ConfigError(path + ": ragged row " + std::to_string(m + 2));
    }
    const double t = parse_double(row[0]);
    if (std::abs(t - grid.node_time(m)) > tol) {
      throw ConfigError(path + ": row " + std::to_string(m + 2) + " time " + row[0] +
                        " does not sit on the expected grid");
    }
    for (int k = 0; k < channels; ++k) {
      u.values()(m, k) = parse_double(row[static_cast<std::size_t>(k) + 1]);
    }
  }
  return u;
}

}  // namespace mmoc
