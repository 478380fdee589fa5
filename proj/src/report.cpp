/*
 * Copyright 2026 The Sightline Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "sightline/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sightline {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b"};
constexpr int kPaletteSize = 6;
constexpr int kTickCount = 5;  // divisions per axis

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
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

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series,
                       std::pair<double, double> x_range,
                       std::pair<double, double> y_range, int size_px) {
  if (series.empty()) {
    throw std::invalid_argument("render_svg: no series to plot");
  }
  for (const PlotSeries& s : series) {
    if (s.points.empty()) {
      throw std::invalid_argument("render_svg: series '" + s.name +
                                  "' has no points");
    }
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) {
        throw std::invalid_argument("render_svg: non-finite point in series '" +
                                    s.name + "'");
      }
    }
  }
  if (!(x_range.first < x_range.second) ||
      !(y_range.first < y_range.second)) {
    throw std::invalid_argument("render_svg: range min must be below max");
  }
  if (size_px < 100) {
    throw std::invalid_argument("render_svg: size too small");
  }

  const double margin_left = 56.0;
  const double margin_bottom = 40.0;
  const double margin_top = 16.0;
  const double margin_right = 16.0;
  const double plot_w = size_px - margin_left - margin_right;
  const double plot_h = size_px - margin_top - margin_bottom;

  const auto to_px_x = [&](double x) {
    return margin_left +
           plot_w * (x - x_range.first) / (x_range.second - x_range.first);
  };
  const auto to_px_y = [&](double y) {
    return margin_top +
           plot_h * (1.0 - (y - y_range.first) /
                               (y_range.second - y_range.first));
  };

  long long clamped = 0;
  std::string body;

  // frame and ticks
  body += "<rect x=\"" + fmt(margin_left) + "\" y=\"" + fmt(margin_top) +
          "\" width=\"" + fmt(plot_w) + "\" height=\"" + fmt(plot_h) +
          "\" fill=\"none\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= kTickCount; ++i) {
    const double fx =
        x_range.first + (x_range.second - x_range.first) * i / kTickCount;
    const double fy =
        y_range.first + (y_range.second - y_range.first) * i / kTickCount;
    const double px = to_px_x(fx);
    const double py = to_px_y(fy);
    body += "<line x1=\"" + fmt(px) + "\" y1=\"" +
            fmt(margin_top + plot_h) + "\" x2=\"" + fmt(px) + "\" y2=\"" +
            fmt(margin_top + plot_h + 5) + "\" stroke=\"#000000\"/>\n";
    body += "<text x=\"" + fmt(px) + "\" y=\"" +
            fmt(margin_top + plot_h + 18) +
            "\" font-size=\"10\" text-anchor=\"middle\">" + fmt(fx) +
            "</text>\n";
    body += "<line x1=\"" + fmt(margin_left - 5) + "\" y1=\"" + fmt(py) +
            "\" x2=\"" + fmt(margin_left) + "\" y2=\"" + fmt(py) +
            "\" stroke=\"#000000\"/>\n";
    body += "<text x=\"" + fmt(margin_left - 8) + "\" y=\"" + fmt(py + 3) +
            "\" font-size=\"10\" text-anchor=\"end\">" + fmt(fy) +
            "</text>\n";
  }

  // axis labels from the first series
  if (!series[0].x_label.empty()) {
    body += "<text x=\"" + fmt(margin_left + plot_w / 2) + "\" y=\"" +
            fmt(static_cast<double>(size_px) - 6) +
            "\" font-size=\"11\" text-anchor=\"middle\">" +
            escape_xml(series[0].x_label) + "</text>\n";
  }
  if (!series[0].y_label.empty()) {
    body += "<text x=\"12\" y=\"" + fmt(margin_top + plot_h / 2) +
            "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 "
            "12 " +
            fmt(margin_top + plot_h / 2) + ")\">" +
            escape_xml(series[0].y_label) + "</text>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % kPaletteSize];
    std::string pts;
    for (const auto& [x, y] : series[si].points) {
      double cx = x;
      double cy = y;
      if (cx < x_range.first || cx > x_range.second || cy < y_range.first ||
          cy > y_range.second) {
        ++clamped;
        cx = std::clamp(cx, x_range.first, x_range.second);
        cy = std::clamp(cy, y_range.first, y_range.second);
      }
      if (!pts.empty()) pts += ' ';
      pts += fmt(to_px_x(cx)) + "," + fmt(to_px_y(cy));
    }
    body += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
            "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";

    // legend swatch + label
    const double ly = margin_top + 14.0 * (si + 1);
    body += "<line x1=\"" + fmt(margin_left + plot_w - 90) + "\" y1=\"" +
            fmt(ly) + "\" x2=\"" + fmt(margin_left + plot_w - 70) +
            "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
            "\" stroke-width=\"1.5\"/>\n";
    body += "<text x=\"" + fmt(margin_left + plot_w - 65) + "\" y=\"" +
            fmt(ly + 3) + "\" font-size=\"10\">" +
            escape_xml(series[si].name) + "</text>\n";
  }

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(size_px) + "\" height=\"" +
                    std::to_string(size_px) + "\" viewBox=\"0 0 " +
                    std::to_string(size_px) + " " + std::to_string(size_px) +
                    "\">\n";
  out += "<!-- clamped points: " + std::to_string(clamped) + " -->\n";
  out += body;
  out += "</svg>\n";
  return out;
}

std::string render_confusion_table(const ConfusionCounts& c,
                                   const std::string& positive_name,
                                   const std::string& negative_name) {
  const std::string cells[4] = {
      std::to_string(c.tp), std::to_string(c.fn),
      std::to_string(c.fp), std::to_string(c.tn)};
  std::size_t cell_w = 8;
  for (const std::string& s : cells) cell_w = std::max(cell_w, s.size());
  cell_w = std::max({cell_w, positive_name.size(), negative_name.size()}) + 2;

  const auto pad = [&](const std::string& s) {
    std::string out(cell_w - s.size(), ' ');
    return out + s;
  };
  const std::string row_header_w(18, ' ');

  std::string out;
  out += row_header_w + pad("predicted") + "\n";
  out += row_header_w + pad(positive_name) + pad(negative_name) + "\n";
  out += "true " + positive_name +
         std::string(13 - std::min<std::size_t>(13, positive_name.size()),
                     ' ') +
         pad(cells[0]) + pad(cells[1]) + "\n";
  out += "true " + negative_name +
         std::string(13 - std::min<std::size_t>(13, negative_name.size()),
                     ' ') +
         pad(cells[2]) + pad(cells[3]) + "\n";
  out += "\n";

  const long long total = c.tp + c.tn + c.fp + c.fn;
  char buf[64];
  if (total == 0) {
    out += "accuracy  undefined\n";
    out += "precision undefined\n";
    out += "recall    undefined\n";
    out += "f1        undefined\n";
  } else {
    const double p = precision(c);
    const double r = recall(c);
    std::snprintf(buf, sizeof(buf), "accuracy  %.3f\n", accuracy(c));
    out += buf;
    std::snprintf(buf, sizeof(buf), "precision %.3f\n", p);
    out += buf;
    std::snprintf(buf, sizeof(buf), "recall    %.3f\n", r);
    out += buf;
    std::snprintf(buf, sizeof(buf), "f1        %.3f\n", f1(p, r));
    out += buf;
  }
  return out;
}

}  // namespace sightline
