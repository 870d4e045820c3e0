#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace resobeam {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  ///< points instead of a polyline
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool log_y = false;
};

/// Static SVG line chart. Long series are reduced to a min/max envelope per
/// pixel column so the file stays small.
void write_svg(const Plot& plot, const std::filesystem::path& path);

}  // namespace resobeam
