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

#include <cstddef>
#include <vector>

namespace sightline {

// Axis-aligned box in center format. Coordinates are fractions of the
// image size, so boxes are resolution independent.
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
};

struct Corners {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
};

struct GroundTruthBox {
  int class_id = 0;
  BoundingBox box;
};

struct Detection {
  int class_id = 0;
  BoundingBox box;
  double confidence = 0.0;
};

Corners to_corners(const BoundingBox& box);

// Throws std::invalid_argument if x2 < x1 or y2 < y1.
BoundingBox from_corners(double x1, double y1, double x2, double y2);

double box_area(const BoundingBox& box);

// Intersection over union. Degenerate inputs yield 0, never NaN.
double iou(const BoundingBox& a, const BoundingBox& b);

// Intersects the box with the unit square. A box fully outside collapses
// to a zero-area box on the boundary.
BoundingBox clip_to_unit(const BoundingBox& box);

// Raw network-output stand-in. values holds S*S*B*(5+num_classes) reals,
// row-major by (cell_row, cell_col, box_index, channel) with channels
// (x, y, w, h, conf, class_0 .. class_{C-1}). Per-box x,y are cell
// relative; w,h are image relative.
struct GridTensor {
  int s = 1;
  int b = 1;
  int num_classes = 1;
  std::vector<double> values;

  static GridTensor zeros(int s, int b, int num_classes);

  int channels() const { return 5 + num_classes; }
  std::size_t expected_size() const;
  std::size_t index(int row, int col, int box, int channel) const;
  double at(int row, int col, int box, int channel) const;
  double& at(int row, int col, int box, int channel);

  // Throws std::invalid_argument on bad dims, length mismatch, or values
  // outside [0,1] beyond 1e-9.
  void validate() const;
};

// Turns grid predictions into absolute detections. Each box contributes at
// most one detection, for its argmax class, scored conf * max class prob.
// Only scores strictly above conf_threshold are emitted, ordered by
// (cell_row, cell_col, box_index).
std::vector<Detection> decode_grid(const GridTensor& t, double conf_threshold);

}  // namespace sightline
