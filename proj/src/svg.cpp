#include "linkfinger/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace linkfinger::plot {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Bounds {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double value) {
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  double span() const { return hi - lo; }
};

std::string Escape(const std::string& text) {
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

double NiceStep(double span) {
  const double raw = span / 5.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  for (double factor : {1.0, 2.0, 5.0}) {
    if (factor * magnitude >= raw) return factor * magnitude;
  }
  return 10.0 * magnitude;
}

void Widen(Bounds& b) {
  if (b.span() <= 0.0) {
    const double pad = b.lo == 0.0 ? 1.0 : std::abs(b.lo) * 0.1;
    b.lo -= pad;
    b.hi += pad;
  }
}

// Format a tick label without trailing noise.
std::string Tick(double value) {
  if (std::abs(value) < 1e-12) value = 0.0;
  return fmt::format("{:g}", value);
}

}  // namespace

std::string RenderSvg(std::span<const Series> series, const AxesSpec& axes) {
  if (series.empty()) throw std::invalid_argument("no series to plot");
  Bounds xb;
  Bounds yb;
  for (const Series& s : series) {
    if (s.points.empty()) {
      throw std::invalid_argument(fmt::format("series '{}' has no points", s.name));
    }
    for (const auto& [x, y] : s.points) {
      xb.add(x);
      yb.add(y);
    }
  }
  Widen(xb);
  Widen(yb);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  if (axes.equal_aspect) {
    const double scale = std::max(xb.span() / plot_w, yb.span() / plot_h);
    const double xc = 0.5 * (xb.lo + xb.hi);
    const double yc = 0.5 * (yb.lo + yb.hi);
    xb = {xc - 0.5 * scale * plot_w, xc + 0.5 * scale * plot_w};
    yb = {yc - 0.5 * scale * plot_h, yc + 0.5 * scale * plot_h};
  }
  const auto px = [&](double x) { return kLeft + (x - xb.lo) / xb.span() * plot_w; };
  const auto py = [&](double y) { return kTop + (yb.hi - y) / yb.span() * plot_h; };

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:g}\" height=\"{1:g}\" "
      "viewBox=\"0 0 {0:g} {1:g}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:g}\" height=\"{:g}\" fill=\"white\"/>\n",
                     kWidth, kHeight);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     kLeft + plot_w / 2, Escape(axes.title));

  // Grid and ticks.
  const double xstep = NiceStep(xb.span());
  for (double t = std::ceil(xb.lo / xstep) * xstep; t <= xb.hi + 1e-9 * xstep; t += xstep) {
    const double x = px(t);
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#dddddd\"/>\n",
        x, kTop, kTop + plot_h);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x,
                       kTop + plot_h + 16, Tick(t));
  }
  const double ystep = NiceStep(yb.span());
  for (double t = std::ceil(yb.lo / ystep) * ystep; t <= yb.hi + 1e-9 * ystep; t += ystep) {
    const double y = py(t);
    svg += fmt::format(
        "<line x1=\"{1:.2f}\" y1=\"{0:.2f}\" x2=\"{2:.2f}\" y2=\"{0:.2f}\" stroke=\"#dddddd\"/>\n",
        y, kLeft, kLeft + plot_w);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n",
                       kLeft - 6, y + 4, Tick(t));
  }
  svg += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      kLeft, kTop, plot_w, plot_h);
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + plot_w / 2, kHeight - 14, Escape(axes.x_label));
  svg += fmt::format(
      "<text x=\"18\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.2f})\">"
      "{1}</text>\n",
      kTop + plot_h / 2, Escape(axes.y_label));

  // Series and legend.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::string coords;
    for (const auto& [x, y] : series[i].points) {
      if (!coords.empty()) coords += ' ';
      coords += fmt::format("{:.2f},{:.2f}", px(x), py(y));
    }
    svg += fmt::format(
        "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color,
        coords);
    const double ly = kTop + 14 + 18 * static_cast<double>(i);
    const double lx = kWidth - kRight + 14;
    svg += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
        "stroke-width=\"3\"/>\n",
        lx, ly - 4, lx + 20, ly - 4, color);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", lx + 26, ly,
                       Escape(series[i].name));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace linkfinger::plot
