#include "collabnet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "collabnet/errors.hpp"

namespace collabnet {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;  // in transformed units (ln for log axes)

  double place(double v) const {
    const double t = log ? std::log(v) : v;
    return (t - lo) / (hi - lo);
  }
};

Axis make_axis(bool log, double min_v, double max_v) {
  Axis axis;
  axis.log = log;
  double lo = log ? std::log(min_v) : min_v;
  double hi = log ? std::log(max_v) : max_v;
  if (!(hi > lo)) {  // degenerate single-value range
    const double pad = std::max(std::abs(lo) * 0.1, 0.5);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  axis.lo = lo;
  axis.hi = hi;
  return axis;
}

}  // namespace

std::string render_svg_plot(const SvgPlotSpec& spec, double width,
                            double height) {
  if (spec.series.empty()) throw InputError("plot needs at least one series");

  bool any_point = false;
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = std::numeric_limits<double>::infinity(), max_y = -min_y;
  auto usable = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (spec.log_x && !(x > 0.0)) return false;
    if (spec.log_y && !(y > 0.0)) return false;
    return true;
  };
  for (const auto& s : spec.series) {
    for (const auto& [x, y] : s.xy) {
      if (!usable(x, y)) continue;
      any_point = true;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  if (!any_point) throw InputError("plot has no drawable points");

  const Axis ax = make_axis(spec.log_x, min_x, max_x);
  const Axis ay = make_axis(spec.log_y, min_y, max_y);

  const double ml = 78.0, mr = 24.0, mt = 46.0, mb = 58.0;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + ax.place(x) * pw; };
  auto py = [&](double y) { return mt + (1.0 - ay.place(y)) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
      << " " << num(height) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << num(ml) << "\" y=\"26\" font-size=\"16\" "
         "font-family=\"sans-serif\">"
      << escape(spec.title) << "</text>\n";

  // frame
  out << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\""
      << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

  // ticks
  auto draw_x_tick = [&](double v, const std::string& label) {
    const double x = px(v);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(mt + ph) << "\" x2=\""
        << num(x) << "\" y2=\"" << num(mt + ph + 5) << "\" stroke=\"#444444\""
        << " stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(mt + ph + 20)
        << "\" font-size=\"11\" font-family=\"sans-serif\" "
           "text-anchor=\"middle\">"
        << escape(label) << "</text>\n";
  };
  auto draw_y_tick = [&](double v, const std::string& label) {
    const double y = py(v);
    out << "<line x1=\"" << num(ml - 5) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(ml) << "\" y2=\"" << num(y) << "\" stroke=\"#444444\""
        << " stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(y + 4)
        << "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">"
        << escape(label) << "</text>\n";
  };

  auto tick_values = [](const Axis& axis) {
    std::vector<double> ticks;
    if (axis.log) {
      const double ln10 = std::log(10.0);
      int first = static_cast<int>(std::ceil(axis.lo / ln10 - 1e-9));
      int last = static_cast<int>(std::floor(axis.hi / ln10 + 1e-9));
      if (last - first > 12) {
        // thin out dense decade ranges
        const int step = (last - first) / 12 + 1;
        for (int e = first; e <= last; e += step)
          ticks.push_back(std::pow(10.0, e));
      } else if (last >= first) {
        for (int e = first; e <= last; ++e) ticks.push_back(std::pow(10.0, e));
      } else {
        ticks.push_back(std::exp(0.5 * (axis.lo + axis.hi)));
      }
    } else {
      const double span = axis.hi - axis.lo;
      const double raw = span / 5.0;
      const double mag = std::pow(10.0, std::floor(std::log10(raw)));
      double step = mag;
      for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
          step = mag * mult;
          break;
        }
      }
      const double start = std::ceil(axis.lo / step) * step;
      for (double v = start; v <= axis.hi + 1e-9 * span; v += step)
        ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    }
    return ticks;
  };

  for (double v : tick_values(ax)) draw_x_tick(v, num(v));
  for (double v : tick_values(ay)) draw_y_tick(v, num(v));

  // axis labels
  out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 14)
      << "\" font-size=\"13\" font-family=\"sans-serif\" "
         "text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << num(mt + ph / 2)
      << "\" font-size=\"13\" font-family=\"sans-serif\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << num(mt + ph / 2) << ")\">" << escape(spec.y_label) << "</text>\n";

  // series
  for (const auto& s : spec.series) {
    std::ostringstream pts;
    std::vector<std::pair<double, double>> markers;
    for (const auto& [x, y] : s.xy) {
      if (!usable(x, y)) continue;
      const double sx = px(x), sy = py(y);
      pts << num(sx) << "," << num(sy) << " ";
      markers.emplace_back(sx, sy);
    }
    std::string p = pts.str();
    if (!p.empty()) p.pop_back();
    out << "<polyline class=\"" << escape(s.css_class) << "\" points=\"" << p
        << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    if (s.points) {
      for (const auto& [sx, sy] : markers)
        out << "<circle cx=\"" << num(sx) << "\" cy=\"" << num(sy)
            << "\" r=\"2.6\" fill=\"" << s.color << "\"/>\n";
    }
  }

  // legend, top-right inside the frame
  double ly = mt + 16.0;
  for (const auto& s : spec.series) {
    if (s.label.empty()) continue;
    const double lx = ml + pw - 150.0;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
        << num(lx + 26) << "\" y2=\"" << num(ly - 4) << "\" stroke=\""
        << s.color << "\" stroke-width=\"2\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    out << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape(s.label)
        << "</text>\n";
    ly += 17.0;
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace collabnet
