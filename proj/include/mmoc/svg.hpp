#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "mmoc/csv_io.hpp"
#include "mmoc/errors.hpp"

namespace mmoc {

/// One curve of an svg_line_plot.
struct SvgSeries {
  std::string label;
  std::vector<double> y;
};

/// Writes a fixed-size line plot with axes and min/max tick labels.  Meant
/// for quick visual checks of controls and cost profiles, not publication.
inline void svg_line_plot(const std::string& path, const std::string& title,
                          const std::vector<double>& x, const std::vector<SvgSeries>& series) {
  if (x.empty() || series.empty()) throw Error("svg_line_plot: nothing to draw");
  for (const auto& s : series) {
    if (s.y.size() != x.size()) throw Error("svg_line_plot: series length mismatch");
  }
  const double width = 900.0, height = 420.0;
  const double ml = 64.0, mr = 16.0, mt = 34.0, mb = 40.0;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = *std::min_element(x.begin(), x.end());
  double xmax = *std::max_element(x.begin(), x.end());
  double ymin = series[0].y[0], ymax = series[0].y[0];
  for (const auto& s : series) {
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) {
    ymax = ymin + 1.0;
    ymin -= 1.0;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }
  auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return mt + (ymax - v) / (ymax - ymin) * ph; };

  static const char* palette[] = {"#1f6feb", "#d1242f", "#1a7f37", "#8250df", "#9a6700"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << title << "</text>\n"
      << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  // Horizontal gridlines at quartiles with value labels.
  for (int i = 0; i <= 4; ++i) {
    const double v = ymin + (ymax - ymin) * i / 4.0;
    const double yy = py(v);
    out << "<line x1=\"" << ml << "\" y1=\"" << yy << "\" x2=\"" << ml + pw << "\" y2=\"" << yy
        << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << ml - 6 << "\" y=\"" << yy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(std::round(v * 1e4) / 1e4)
        << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = xmin + (xmax - xmin) * i / 4.0;
    out << "<text x=\"" << px(v) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(std::round(v * 1e4) / 1e4) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = palette[s % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) out << ' ';
      out << px(x[i]) << ',' << py(series[s].y[i]);
    }
    out << "\"/>\n";
    out << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 16.0 * static_cast<double>(s)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
  atomic_write_file(path, out.str());
}

}  // namespace mmoc
