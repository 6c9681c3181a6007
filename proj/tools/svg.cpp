#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace errbound::cli {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 50.0;

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

const char* curve_color(BoundKind kind) {
  switch (kind) {
    case BoundKind::UnconstrainedG: return "#888888";
    case BoundKind::RefinedH: return "#c0392b";
    case BoundKind::Linear: return "#2471a3";
  }
  return "#000000";
}

}  // namespace

std::string render_svg(std::span<const BoundCurve> curves,
                       std::span<const SimulationRecord> points, const std::string& preamble) {
  double y_max = 0.0;
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      if (std::isfinite(p.value)) y_max = std::max(y_max, p.value);
    }
  }
  y_max = std::max(y_max * 1.1, 0.1);

  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  const auto px = [&](double delta) { return kMargin + std::clamp(delta, 0.0, 1.0) * plot_w; };
  const auto py = [&](double value) {
    const double v = std::isfinite(value) ? std::clamp(value, 0.0, y_max) : y_max;
    return kHeight - kMargin - v / y_max * plot_h;
  };

  std::ostringstream svg;
  svg << preamble;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << coord(px(0)) << "\" y1=\"" << coord(py(0)) << "\" x2=\""
      << coord(px(1)) << "\" y2=\"" << coord(py(0)) << "\"/>\n";
  svg << "<line x1=\"" << coord(px(0)) << "\" y1=\"" << coord(py(0)) << "\" x2=\""
      << coord(px(0)) << "\" y2=\"" << coord(py(y_max)) << "\"/>\n";
  svg << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<text x=\"" << coord(kWidth / 2) << "\" y=\"" << coord(kHeight - 12)
      << "\" text-anchor=\"middle\">error mismatch</text>\n";
  svg << "<text x=\"14\" y=\"" << coord(kHeight / 2) << "\" transform=\"rotate(-90 14 "
      << coord(kHeight / 2) << ")\" text-anchor=\"middle\">KL divergence</text>\n";
  svg << "<text x=\"" << coord(px(0)) << "\" y=\"" << coord(py(0) + 16)
      << "\" text-anchor=\"middle\">0</text>\n";
  svg << "<text x=\"" << coord(px(1)) << "\" y=\"" << coord(py(0) + 16)
      << "\" text-anchor=\"middle\">1</text>\n";
  svg << "<text x=\"" << coord(px(0) - 6) << "\" y=\"" << coord(py(y_max) + 4)
      << "\" text-anchor=\"end\">" << coord(y_max) << "</text>\n";
  svg << "</g>\n";

  if (!points.empty()) {
    svg << "<g fill=\"#1e8449\" fill-opacity=\"0.35\">\n";
    for (const auto& r : points) {
      svg << "<circle cx=\"" << coord(px(r.delta)) << "\" cy=\"" << coord(py(r.kl))
          << "\" r=\"1.5\"/>\n";
    }
    svg << "</g>\n";
  }

  for (const auto& curve : curves) {
    svg << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << curve_color(curve.kind)
        << "\" points=\"";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << coord(px(curve.points[i].delta)) << ',' << coord(py(curve.points[i].value));
    }
    svg << "\"/>\n";
  }

  double legend_y = kMargin;
  for (const auto& curve : curves) {
    svg << "<text x=\"" << coord(kMargin + 10) << "\" y=\"" << coord(legend_y)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << curve_color(curve.kind)
        << "\">" << to_string(curve.kind) << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace errbound::cli
