#include "specgnn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace specgnn {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 160.0;  // room for the legend
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series,
                          std::optional<double> reference_y) {
  if (series.empty()) throw std::invalid_argument("write_line_chart_svg: no series");
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
  for (const SvgSeries& s : series) {
    if (s.x.size() != s.y.size() || s.x.empty()) {
      throw std::invalid_argument("write_line_chart_svg: series '" + s.label +
                                  "' has mismatched or empty data");
    }
    for (double v : s.x) {
      x_min = std::min(x_min, v);
      x_max = std::max(x_max, v);
    }
    for (double v : s.y) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (reference_y) {
    y_min = std::min(y_min, *reference_y);
    y_max = std::max(y_max, *reference_y);
  }
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  // A little headroom keeps curves off the frame.
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double v) { return kMarginLeft + (v - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double v) { return kMarginTop + (y_max - v) / (y_max - y_min) * plot_h; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_line_chart_svg: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // Frame and ticks.
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / ticks;
    const double fy = y_min + (y_max - y_min) * i / ticks;
    out << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << fmt(sx(fx)) << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << kMarginTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fx)
        << "</text>\n";
    out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << fmt(sy(fy)) << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << fmt(sy(fy)) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << kMarginLeft - 9 << "\" y=\"" << fmt(sy(fy) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">" << y_label
      << "</text>\n";

  if (reference_y) {
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(sy(*reference_y)) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << fmt(sy(*reference_y))
        << "\" stroke=\"#000\" stroke-dasharray=\"6,4\"/>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const SvgSeries& s = series[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i > 0) out << " ";
      out << fmt(sx(s.x[i])) << "," << fmt(sy(s.y[i]));
    }
    out << "\"/>\n";

    const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << kMarginLeft + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kMarginLeft + plot_w + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n";
    out << "<text x=\"" << kMarginLeft + plot_w + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace specgnn
