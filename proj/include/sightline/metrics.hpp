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
#include <utility>
#include <vector>

#include "sightline/geometry.hpp"

namespace sightline {

struct ConfusionCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;  // meaningful only for binary image-level labels
};

inline ConfusionCounts operator+(const ConfusionCounts& a,
                                 const ConfusionCounts& b) {
  return ConfusionCounts{a.tp + b.tp, a.fp + b.fp, a.fn + b.fn, a.tn + b.tn};
}

struct MatchResult {
  ConfusionCounts counts;
  std::vector<bool> detection_matched;  // per original detection index
};

// Greedy detection-to-ground-truth assignment: detections in descending
// confidence (ties by original index) each claim the unmatched same-class
// ground truth with the highest IoU, provided it reaches iou_threshold.
MatchResult match(const std::vector<Detection>& dets,
                  const std::vector<GroundTruthBox>& gts,
                  double iou_threshold);

// Division-by-zero conventions: precision and recall are 0 when their
// denominators vanish, f1 is 0 when p + r is 0.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double f1(double p, double r);

// Throws std::invalid_argument when every count is zero.
double accuracy(const ConfusionCounts& c);

struct PRPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// One point per distinct confidence value, descending; at each cut the
// detections at or above it count cumulatively.
std::vector<PRPoint> pr_curve(const std::vector<Detection>& dets,
                              const std::vector<bool>& match_flags,
                              std::size_t num_gt);

// Confidence/flag pairs let callers pool matches across images.
struct ScoredFlag {
  double confidence = 0.0;
  bool matched = false;
};
std::vector<PRPoint> pr_curve_from_flags(std::vector<ScoredFlag> flags,
                                         std::size_t num_gt);

// Area under the interpolated precision envelope
// p(r) = max{precision_i : recall_i >= r}, integrated over recall.
// Empty curve yields 0.
double average_precision(const std::vector<PRPoint>& curve);

struct MetricsRow {
  double iou_threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double map_value = 0.0;
};

// Per threshold: aggregate precision/recall/f1 from a single match over all
// classes, and mAP as the mean per-class AP over classes with at least one
// ground truth.
std::vector<MetricsRow> map_over_thresholds(
    const std::vector<Detection>& dets,
    const std::vector<GroundTruthBox>& gts,
    const std::vector<double>& thresholds, int num_classes);

enum class BinaryLabel { weapon, no_weapon };

// Tallies a 2x2 matrix of (predicted, actual) image-level labels with the
// caller-selected positive class.
ConfusionCounts binary_image_confusion(
    const std::vector<std::pair<BinaryLabel, BinaryLabel>>& predicted_actual,
    BinaryLabel positive);

}  // namespace sightline
