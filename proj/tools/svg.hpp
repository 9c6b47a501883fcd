#pragma once

// Minimal self-contained SVG plots: line/scatter charts and heatmaps.

#include <optional>
#include <string>
#include <vector>

namespace arpsim::cli {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
  std::string color = "#1f77b4";
  bool line = true;
  bool markers = false;
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<double> x_min, x_max, y_min, y_max;
  bool log_x = false;
  bool log_y = false;
  /// square plot area
  bool square = false;
};

std::string line_chart(const Axes& axes, const std::vector<Series>& series);

/// Several charts side by side in one document (e.g. three Bloch projections).
std::string chart_row(const std::vector<std::pair<Axes, std::vector<Series>>>& panels);

struct Heatmap {
  Axes axes;
  std::vector<double> x;  // column coordinates
  std::vector<double> y;  // row coordinates
  /// values[ix * y.size() + iy]
  std::vector<double> values;
  double v_min = 0.0;
  double v_max = 1.0;
  /// drawn on top, clipped to the plot area
  std::vector<Series> overlays;
};

std::string heatmap(const Heatmap& h);

/// 256-entry viridis-like table, index 0 = low.
const char* colormap(double t);

}  // namespace arpsim::cli
