#ifndef HERIT_RIDGE_SVG_HPP
#define HERIT_RIDGE_SVG_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "herit_ridge/errors.hpp"

namespace heritridge {

// Self-contained SVG line charts; output bytes are a pure function of the
// input tables (fixed formatting, no timestamps).
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> bars;  // optional symmetric error bars, empty or |x|-sized
  bool mark_min = false;     // highlight the argmin point
};

namespace svg_detail {

inline std::string num(double v, int precision = 6) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

inline std::string coord(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1b6ca8", "#d1495b", "#2e933c",
                                 "#8f2d56", "#e0a100", "#50514f"};
  return colors[i % 6];
}

}  // namespace svg_detail

inline std::string render_line_chart(const std::string& title, const std::string& xlabel,
                                     const std::string& ylabel,
                                     const std::vector<PlotSeries>& series) {
  if (series.empty()) throw EmptyCurve("no series to plot");
  for (const auto& s : series) {
    if (s.x.size() < 2 || s.x.size() != s.y.size())
      throw EmptyCurve("series '" + s.label + "' needs at least 2 rows");
    if (!s.bars.empty() && s.bars.size() != s.x.size())
      throw DimensionMismatch("error bars must match the series length");
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      const double bar = s.bars.empty() ? 0.0 : s.bars[i];
      ymin = std::min(ymin, s.y[i] - bar);
      ymax = std::max(ymax, s.y[i] + bar);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double xpad = 0.05 * (xmax - xmin);
  const double ypad = 0.05 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const double width = 800, height = 500;
  const double left = 80, right = 770, top = 50, bottom = 450;
  const auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * (right - left); };
  const auto sy = [&](double v) { return bottom - (v - ymin) / (ymax - ymin) * (bottom - top); };

  using svg_detail::coord;
  using svg_detail::num;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<rect width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + title + "</text>\n";

  // axes
  out += "<line x1=\"" + coord(left) + "\" y1=\"" + coord(bottom) + "\" x2=\"" + coord(right) +
         "\" y2=\"" + coord(bottom) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + coord(left) + "\" y1=\"" + coord(top) + "\" x2=\"" + coord(left) +
         "\" y2=\"" + coord(bottom) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 5.0;
    const double yv = ymin + (ymax - ymin) * t / 5.0;
    out += "<line x1=\"" + coord(sx(xv)) + "\" y1=\"" + coord(bottom) + "\" x2=\"" +
           coord(sx(xv)) + "\" y2=\"" + coord(bottom + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + coord(sx(xv)) + "\" y=\"" + coord(bottom + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + num(xv, 4) +
           "</text>\n";
    out += "<line x1=\"" + coord(left - 5) + "\" y1=\"" + coord(sy(yv)) + "\" x2=\"" +
           coord(left) + "\" y2=\"" + coord(sy(yv)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + coord(left - 8) + "\" y=\"" + coord(sy(yv) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(yv, 4) +
           "</text>\n";
  }
  out += "<text x=\"425\" y=\"488\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">" + xlabel + "</text>\n";
  out += "<text x=\"20\" y=\"250\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 20 250)\">" + ylabel + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = svg_detail::palette(si);
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) points += ' ';
      points += coord(sx(s.x[i])) + "," + coord(sy(s.y[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!s.bars.empty() && s.bars[i] > 0.0) {
        out += "<line x1=\"" + coord(sx(s.x[i])) + "\" y1=\"" + coord(sy(s.y[i] - s.bars[i])) +
               "\" x2=\"" + coord(sx(s.x[i])) + "\" y2=\"" + coord(sy(s.y[i] + s.bars[i])) +
               "\" stroke=\"" + color + "\" stroke-width=\"1\"/>\n";
      }
      out += "<circle cx=\"" + coord(sx(s.x[i])) + "\" cy=\"" + coord(sy(s.y[i])) +
             "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
    }
    if (s.mark_min) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < s.y.size(); ++i)
        if (s.y[i] < s.y[best]) best = i;
      out += "<line x1=\"" + coord(sx(s.x[best])) + "\" y1=\"" + coord(top) + "\" x2=\"" +
             coord(sx(s.x[best])) + "\" y2=\"" + coord(bottom) + "\" stroke=\"" + color +
             "\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n";
      out += "<circle cx=\"" + coord(sx(s.x[best])) + "\" cy=\"" + coord(sy(s.y[best])) +
             "\" r=\"5\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    }
    // legend
    const double ly = top + 18.0 * static_cast<double>(si);
    out += "<line x1=\"" + coord(right - 150) + "\" y1=\"" + coord(ly) + "\" x2=\"" +
           coord(right - 125) + "\" y2=\"" + coord(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + coord(right - 118) + "\" y=\"" + coord(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace heritridge

#endif  // HERIT_RIDGE_SVG_HPP
