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

#include <vector>

#include "sightline/geometry.hpp"

namespace sightline {

// Row-major, channel-interleaved pixel array with values in [0,1].
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> pixels;

  static ImageBuffer filled(int width, int height, int channels, double value);

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double at(int x, int y, int c) const { return pixels[index(x, y, c)]; }
  double& at(int x, int y, int c) { return pixels[index(x, y, c)]; }

  void validate() const;
};

struct AugmentationSpec {
  double theta = 0.0;  // radians, rotation about the image center
  double scale = 1.0;
  bool hflip = false;
  double brightness = 1.0;
  double contrast = 1.0;
  double saturation = 1.0;
  double min_box_retention = 0.25;
};

struct Augmented {
  ImageBuffer image;
  std::vector<GroundTruthBox> boxes;
};

// Rotates about the image center using inverse-mapped nearest-neighbor
// sampling; samples falling outside the frame read as 0. Each box becomes
// the axis-aligned hull of its rotated corners, clipped to the frame; boxes
// whose clipped area drops below min_box_retention times their original
// area are dropped.
Augmented rotate(const ImageBuffer& img,
                 const std::vector<GroundTruthBox>& boxes, double theta,
                 double min_box_retention = 0.25);

// Nearest-neighbor resize to round(factor * dims). Normalized boxes are
// unchanged. Throws std::invalid_argument when a dimension would round
// to zero.
Augmented scale(const ImageBuffer& img,
                const std::vector<GroundTruthBox>& boxes, double factor);

// Mirrors pixel columns and reflects box centers (cx -> 1 - cx).
Augmented hflip(const ImageBuffer& img,
                const std::vector<GroundTruthBox>& boxes);

// Photometric jitter, applied brightness -> contrast -> saturation with
// clamping to [0,1] after each step. Contrast pivots on the per-image mean;
// saturation blends each pixel with its luminance (3-channel images only).
ImageBuffer color_jitter(const ImageBuffer& img, double brightness,
                         double contrast, double saturation);

// Full chain: color_jitter, then hflip (if set), then scale, then rotate.
Augmented compose(const ImageBuffer& img,
                  const std::vector<GroundTruthBox>& boxes,
                  const AugmentationSpec& spec);

}  // namespace sightline
