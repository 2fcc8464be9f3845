#pragma once

#include <optional>
#include <string>
#include <vector>

namespace chainfair {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Dotted horizontal reference line, e.g. the 1/3 level.
  std::optional<double> reference_y;
};

/// Polyline chart, one <polyline> per series, with axes, ticks and legend.
std::string svg_line_chart(const PlotSpec& spec, const std::vector<PlotSeries>& series);

/// Grouped bars: every series must share the same x positions; bars of the
/// same x sit side by side.
std::string svg_bar_chart(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace chainfair
