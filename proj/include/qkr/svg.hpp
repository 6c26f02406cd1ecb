#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qkr::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline constexpr int width = 640;
inline constexpr int height = 420;
inline constexpr int margin = 56;
inline const std::vector<std::string> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

inline std::string header(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
      width, height, width / 2, title);
}

inline std::string axes(double x0, double x1, double y0, double y1, const std::string& xlabel,
                        const std::string& ylabel) {
  const int right = width - margin / 2;
  const int bottom = height - margin;
  return fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<text x=\"{0}\" y=\"{4}\" text-anchor=\"middle\">{5:.4g}</text>\n"
      "<text x=\"{2}\" y=\"{4}\" text-anchor=\"middle\">{6:.4g}</text>\n"
      "<text x=\"{7}\" y=\"{1}\" text-anchor=\"end\">{8:.4g}</text>\n"
      "<text x=\"{7}\" y=\"{9}\" text-anchor=\"end\">{10:.4g}</text>\n"
      "<text x=\"{11}\" y=\"{12}\" text-anchor=\"middle\">{13}</text>\n"
      "<text x=\"14\" y=\"{14}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {14})\">{15}</text>\n",
      margin, bottom, right, margin / 2 + 8, bottom + 16, x0, x1, margin - 4, y0, margin / 2 + 12, y1,
      (margin + right) / 2, height - 12, xlabel, (bottom + margin / 2) / 2, ylabel);
}

}  // namespace detail

/// Line plot of one or more series. Log axes drop non-positive points.
inline std::string line_plot(const std::string& title, const std::vector<Series>& series, const std::string& xlabel,
                             const std::string& ylabel, bool log_x = false, bool log_y = false) {
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) { return (!log_x || x > 0) && (!log_y || y > 0) && std::isfinite(y); };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  if (!log_y) y0 = std::min(0.0, y0);

  const double plot_w = detail::width - 1.5 * detail::margin;
  const double plot_h = detail::height - 1.5 * detail::margin;
  auto px = [&](double v) { return detail::margin + (tx(v) - x0) / (x1 - x0) * plot_w; };
  auto py = [&](double v) { return detail::height - detail::margin - (ty(v) - y0) / (y1 - y0) * plot_h; };

  std::string out = detail::header(title);
  out += detail::axes(log_x ? std::pow(10, x0) : x0, log_x ? std::pow(10, x1) : x1,
                      log_y ? std::pow(10, y0) : y0, log_y ? std::pow(10, y1) : y1, xlabel, ylabel);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& colour = detail::palette[k % detail::palette.size()];
    std::string points;
    for (std::size_t i = 0; i < series[k].x.size(); ++i)
      if (usable(series[k].x[i], series[k].y[i]))
        points += fmt::format("{:.2f},{:.2f} ", px(series[k].x[i]), py(series[k].y[i]));
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", colour, points);
    out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", detail::width - 170,
                       detail::margin / 2 + 16 + 14 * static_cast<int>(k), colour, series[k].label);
  }
  return out + "</svg>\n";
}

/// Heat map of rows (time) by columns (momentum from first_n upward).
inline std::string heat_map(const std::string& title, const std::vector<std::vector<double>>& rows, int first_n,
                            int first_t) {
  double peak = 0.0;
  for (const auto& r : rows)
    for (double v : r) peak = std::max(peak, v);
  if (peak <= 0.0) peak = 1.0;
  const std::size_t cols = rows.empty() ? 1 : rows.front().size();
  const double plot_w = detail::width - 1.5 * detail::margin;
  const double plot_h = detail::height - 1.5 * detail::margin;
  const double cw = plot_w / static_cast<double>(cols);
  const double ch = plot_h / static_cast<double>(std::max<std::size_t>(1, rows.size()));
  std::string out = detail::header(title);
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t c = 0; c < rows[t].size(); ++c) {
      const double level = std::sqrt(rows[t][c] / peak);  // sqrt scale keeps the flanks visible
      const int shade = 255 - static_cast<int>(std::lround(255 * level));
      out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"rgb({},{},255)\"/>\n",
                         detail::margin + c * cw, detail::height - detail::margin - (t + 1) * ch, cw + 0.05,
                         ch + 0.05, shade, shade);
    }
  out += detail::axes(first_n, first_n + static_cast<double>(cols) - 1, first_t,
                      first_t + static_cast<double>(rows.size()) - 1, "momentum n", "kick t");
  return out + "</svg>\n";
}

}  // namespace qkr::svg
