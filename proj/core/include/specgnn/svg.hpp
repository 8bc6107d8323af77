#pragma once

#include <optional>
#include <string>
#include <vector>

namespace specgnn {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal self-contained SVG line chart: axes with tick labels, one polyline
/// per series, legend, and an optional dashed horizontal reference line
/// (e.g. a constraint bound). CSV remains the normative artifact; this is a
/// convenience rendering with deterministic output.
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series,
                          std::optional<double> reference_y = std::nullopt);

}  // namespace specgnn
