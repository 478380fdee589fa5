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
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sightline/metrics.hpp"

namespace sightline {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
  std::string x_label;
  std::string y_label;
};

// Minimal line plot using only rect, line, polyline and text elements.
// Output is a pure function of the inputs (no timestamps), so identical
// calls yield byte-identical documents. Points outside the ranges are
// clamped; the clamp count is recorded in an SVG comment. Throws
// std::invalid_argument on an empty series list, an empty series, or a
// degenerate range.
std::string render_svg(const std::vector<PlotSeries>& series,
                       std::pair<double, double> x_range,
                       std::pair<double, double> y_range, int size_px);

// Aligned 2x2 text table (rows: true label, columns: predicted) followed by
// the derived metrics; metrics print "undefined" when every count is zero.
std::string render_confusion_table(const ConfusionCounts& c,
                                   const std::string& positive_name,
                                   const std::string& negative_name);

}  // namespace sightline
