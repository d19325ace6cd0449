#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace linkfinger::plot {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct AxesSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool equal_aspect = false;  // same mm-per-pixel on both axes (tip traces)
};

// Standalone SVG: one polyline per series in input order, labelled axes with
// tick values, and a legend. Output depends only on the arguments.
// Throws std::invalid_argument for an empty series list or an empty series.
std::string RenderSvg(std::span<const Series> series, const AxesSpec& axes);

}  // namespace linkfinger::plot
