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
#include "sightline/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sightline {

Corners to_corners(const BoundingBox& box) {
  return Corners{box.cx - box.w / 2.0, box.cy - box.h / 2.0,
                 box.cx + box.w / 2.0, box.cy + box.h / 2.0};
}

BoundingBox from_corners(double x1, double y1, double x2, double y2) {
  if (x2 < x1 || y2 < y1) {
    throw std::invalid_argument("from_corners: max corner below min corner");
  }
  return BoundingBox{(x1 + x2) / 2.0, (y1 + y2) / 2.0, x2 - x1, y2 - y1};
}

double box_area(const BoundingBox& box) { return box.w * box.h; }

double iou(const BoundingBox& a, const BoundingBox& b) {
  const Corners ca = to_corners(a);
  const Corners cb = to_corners(b);
  const double iw = std::min(ca.x2, cb.x2) - std::max(ca.x1, cb.x1);
  const double ih = std::min(ca.y2, cb.y2) - std::max(ca.y1, cb.y1);
  const double inter = std::max(iw, 0.0) * std::max(ih, 0.0);
  const double uni = box_area(a) + box_area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

BoundingBox clip_to_unit(const BoundingBox& box) {
  const Corners c = to_corners(box);
  double x1 = std::clamp(c.x1, 0.0, 1.0);
  double y1 = std::clamp(c.y1, 0.0, 1.0);
  double x2 = std::clamp(c.x2, 0.0, 1.0);
  double y2 = std::clamp(c.y2, 0.0, 1.0);
  if (x2 < x1) x2 = x1;
  if (y2 < y1) y2 = y1;
  return from_corners(x1, y1, x2, y2);
}

GridTensor GridTensor::zeros(int s, int b, int num_classes) {
  GridTensor t;
  t.s = s;
  t.b = b;
  t.num_classes = num_classes;
  t.values.assign(static_cast<std::size_t>(s) * s * b * (5 + num_classes),
                  0.0);
  return t;
}

std::size_t GridTensor::expected_size() const {
  return static_cast<std::size_t>(s) * s * b * channels();
}

std::size_t GridTensor::index(int row, int col, int box, int channel) const {
  return ((static_cast<std::size_t>(row) * s + col) * b + box) * channels() +
         channel;
}

double GridTensor::at(int row, int col, int box, int channel) const {
  return values[index(row, col, box, channel)];
}

double& GridTensor::at(int row, int col, int box, int channel) {
  return values[index(row, col, box, channel)];
}

void GridTensor::validate() const {
  if (s < 1 || b < 1 || num_classes < 1) {
    throw std::invalid_argument("grid tensor: dims must be positive");
  }
  if (s > 4096 || b > 256 || num_classes > 65536) {
    throw std::invalid_argument("grid tensor: dims exceed supported limits");
  }
  if (values.size() != expected_size()) {
    throw std::invalid_argument(
        "grid tensor: expected " + std::to_string(expected_size()) +
        " values, got " + std::to_string(values.size()));
  }
  constexpr double kTol = 1e-9;
  for (double v : values) {
    if (!std::isfinite(v) || v < -kTol || v > 1.0 + kTol) {
      throw std::invalid_argument("grid tensor: channel value out of [0,1]");
    }
  }
}

std::vector<Detection> decode_grid(const GridTensor& t, double conf_threshold) {
  if (t.values.size() != t.expected_size()) {
    throw std::invalid_argument("decode_grid: tensor length mismatch");
  }
  std::vector<Detection> out;
  for (int row = 0; row < t.s; ++row) {
    for (int col = 0; col < t.s; ++col) {
      for (int k = 0; k < t.b; ++k) {
        const double conf = t.at(row, col, k, 4);
        int best_class = 0;
        double best_prob = t.at(row, col, k, 5);
        for (int c = 1; c < t.num_classes; ++c) {
          const double p = t.at(row, col, k, 5 + c);
          if (p > best_prob) {
            best_prob = p;
            best_class = c;
          }
        }
        const double score = conf * best_prob;
        if (score > conf_threshold) {
          Detection det;
          det.class_id = best_class;
          det.box.cx = (col + t.at(row, col, k, 0)) / t.s;
          det.box.cy = (row + t.at(row, col, k, 1)) / t.s;
          det.box.w = t.at(row, col, k, 2);
          det.box.h = t.at(row, col, k, 3);
          det.confidence = score;
          out.push_back(det);
        }
      }
    }
  }
  return out;
}

}  // namespace sightline
