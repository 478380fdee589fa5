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
#include "sightline/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sightline {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Nearest-neighbor source column/row for a destination index, mapping
// through pixel centers at the realized scale ratio.
int nn_source(int dst, int src_size, int dst_size) {
  const double pos = (dst + 0.5) * static_cast<double>(src_size) / dst_size;
  return std::clamp(static_cast<int>(std::floor(pos)), 0, src_size - 1);
}

}  // namespace

ImageBuffer ImageBuffer::filled(int width, int height, int channels,
                                double value) {
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.pixels.assign(
      static_cast<std::size_t>(width) * height * channels, value);
  return img;
}

void ImageBuffer::validate() const {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image: dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw std::invalid_argument("image: channels must be 1 or 3");
  }
  if (pixels.size() !=
      static_cast<std::size_t>(width) * height * channels) {
    throw std::invalid_argument("image: pixel count mismatch");
  }
  for (double v : pixels) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("image: pixel value outside [0,1]");
    }
  }
}

Augmented rotate(const ImageBuffer& img,
                 const std::vector<GroundTruthBox>& boxes, double theta,
                 double min_box_retention) {
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("rotate: theta must be finite");
  }
  if (theta == 0.0) return Augmented{img, boxes};

  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx0 = img.width / 2.0;
  const double cy0 = img.height / 2.0;

  ImageBuffer out = ImageBuffer::filled(img.width, img.height, img.channels,
                                        0.0);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      // inverse map: destination pixel center back to the source frame
      const double dx = x + 0.5 - cx0;
      const double dy = y + 0.5 - cy0;
      const double sx = cx0 + c * dx + s * dy;
      const double sy = cy0 - s * dx + c * dy;
      if (sx < 0.0 || sx >= img.width || sy < 0.0 || sy >= img.height)
        continue;
      const int ix = static_cast<int>(std::floor(sx));
      const int iy = static_cast<int>(std::floor(sy));
      for (int ch = 0; ch < img.channels; ++ch) {
        out.at(x, y, ch) = img.at(ix, iy, ch);
      }
    }
  }

  std::vector<GroundTruthBox> out_boxes;
  for (const GroundTruthBox& gt : boxes) {
    const Corners co = to_corners(gt.box);
    const double xs[4] = {co.x1, co.x2, co.x2, co.x1};
    const double ys[4] = {co.y1, co.y1, co.y2, co.y2};
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
    for (int i = 0; i < 4; ++i) {
      // forward-rotate each corner in pixel space so non-square frames
      // keep their aspect
      const double px = xs[i] * img.width - cx0;
      const double py = ys[i] * img.height - cy0;
      const double rx = (cx0 + c * px - s * py) / img.width;
      const double ry = (cy0 + s * px + c * py) / img.height;
      if (i == 0) {
        min_x = max_x = rx;
        min_y = max_y = ry;
      } else {
        min_x = std::min(min_x, rx);
        max_x = std::max(max_x, rx);
        min_y = std::min(min_y, ry);
        max_y = std::max(max_y, ry);
      }
    }
    const BoundingBox hull = from_corners(min_x, min_y, max_x, max_y);
    const BoundingBox clipped = clip_to_unit(hull);
    if (box_area(clipped) < min_box_retention * box_area(gt.box)) continue;
    out_boxes.push_back(GroundTruthBox{gt.class_id, clipped});
  }
  return Augmented{std::move(out), std::move(out_boxes)};
}

Augmented scale(const ImageBuffer& img,
                const std::vector<GroundTruthBox>& boxes, double factor) {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("scale: factor must be positive");
  }
  const long out_w_l = std::lround(factor * img.width);
  const long out_h_l = std::lround(factor * img.height);
  if (out_w_l < 1 || out_h_l < 1) {
    throw std::invalid_argument("scale: output would round to zero pixels");
  }
  if (out_w_l > 32768 || out_h_l > 32768) {
    throw std::invalid_argument("scale: output exceeds the supported size");
  }
  const int out_w = static_cast<int>(out_w_l);
  const int out_h = static_cast<int>(out_h_l);
  ImageBuffer out = ImageBuffer::filled(out_w, out_h, img.channels, 0.0);
  for (int y = 0; y < out_h; ++y) {
    const int sy = nn_source(y, img.height, out_h);
    for (int x = 0; x < out_w; ++x) {
      const int sx = nn_source(x, img.width, out_w);
      for (int ch = 0; ch < img.channels; ++ch) {
        out.at(x, y, ch) = img.at(sx, sy, ch);
      }
    }
  }
  return Augmented{std::move(out), boxes};
}

Augmented hflip(const ImageBuffer& img,
                const std::vector<GroundTruthBox>& boxes) {
  ImageBuffer out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int ch = 0; ch < img.channels; ++ch) {
        out.at(x, y, ch) = img.at(img.width - 1 - x, y, ch);
      }
    }
  }
  std::vector<GroundTruthBox> out_boxes = boxes;
  for (GroundTruthBox& gt : out_boxes) {
    gt.box.cx = 1.0 - gt.box.cx;
  }
  return Augmented{std::move(out), std::move(out_boxes)};
}

ImageBuffer color_jitter(const ImageBuffer& img, double brightness,
                         double contrast, double saturation) {
  if (!(brightness > 0.0) || !(contrast > 0.0) || saturation < 0.0) {
    throw std::invalid_argument("color_jitter: parameter out of range");
  }
  ImageBuffer out = img;

  if (brightness != 1.0) {
    for (double& p : out.pixels) p = clamp01(p * brightness);
  }

  if (contrast != 1.0) {
    double sum = 0.0;
    for (double p : out.pixels) sum += p;
    const double mean = out.pixels.empty() ? 0.0 : sum / out.pixels.size();
    for (double& p : out.pixels) p = clamp01((p - mean) * contrast + mean);
  }

  if (saturation != 1.0 && out.channels == 3) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        const double gray = 0.299 * out.at(x, y, 0) +
                            0.587 * out.at(x, y, 1) +
                            0.114 * out.at(x, y, 2);
        for (int ch = 0; ch < 3; ++ch) {
          out.at(x, y, ch) =
              clamp01(gray + saturation * (out.at(x, y, ch) - gray));
        }
      }
    }
  }
  return out;
}

Augmented compose(const ImageBuffer& img,
                  const std::vector<GroundTruthBox>& boxes,
                  const AugmentationSpec& spec) {
  if (!(spec.min_box_retention > 0.0) || spec.min_box_retention > 1.0) {
    throw std::invalid_argument("compose: min_box_retention outside (0,1]");
  }
  Augmented cur{color_jitter(img, spec.brightness, spec.contrast,
                             spec.saturation),
                boxes};
  if (spec.hflip) cur = hflip(cur.image, cur.boxes);
  cur = scale(cur.image, cur.boxes, spec.scale);
  cur = rotate(cur.image, cur.boxes, spec.theta, spec.min_box_retention);
  return cur;
}

}  // namespace sightline
