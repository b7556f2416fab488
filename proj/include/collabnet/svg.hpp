#pragma once

#include <string>
#include <utility>
#include <vector>

namespace collabnet {

struct SvgSeries {
  std::string label;
  std::string color = "#000000";
  std::string css_class;  // stamped on the polyline for structural diffing
  bool dashed = false;
  bool points = false;  // draw a marker at each vertex
  std::vector<std::pair<double, double>> xy;
};

struct SvgPlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<SvgSeries> series;
};

/// Render a self-contained SVG document: axes, decade or linear ticks, one
/// polyline per series, and a legend. Non-finite points, and nonpositive
/// ones on log axes, are dropped.
std::string render_svg_plot(const SvgPlotSpec& spec, double width = 860.0,
                            double height = 600.0);

}  // namespace collabnet
