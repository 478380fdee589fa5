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
#include "sightline/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sightline {

MatchResult match(const std::vector<Detection>& dets,
                  const std::vector<GroundTruthBox>& gts,
                  double iou_threshold) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].confidence != dets[b].confidence) {
      return dets[a].confidence > dets[b].confidence;
    }
    return a < b;
  });

  MatchResult result;
  result.detection_matched.assign(dets.size(), false);
  std::vector<bool> gt_taken(gts.size(), false);

  for (std::size_t i : order) {
    const Detection& det = dets[i];
    std::size_t best_gt = gts.size();
    double best_iou = -1.0;  // ties keep the lowest ground-truth index
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gt_taken[g] || gts[g].class_id != det.class_id) continue;
      const double overlap = iou(det.box, gts[g].box);
      if (overlap > best_iou) {
        best_iou = overlap;
        best_gt = g;
      }
    }
    if (best_gt != gts.size() && best_iou >= iou_threshold) {
      gt_taken[best_gt] = true;
      result.detection_matched[i] = true;
      ++result.counts.tp;
    } else {
      ++result.counts.fp;
    }
  }
  for (bool taken : gt_taken) {
    if (!taken) ++result.counts.fn;
  }
  return result;
}

double precision(const ConfusionCounts& c) {
  const long long denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / denom;
}

double recall(const ConfusionCounts& c) {
  const long long denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / denom;
}

double f1(double p, double r) {
  const double denom = p + r;
  return denom == 0.0 ? 0.0 : 2.0 * p * r / denom;
}

double accuracy(const ConfusionCounts& c) {
  const long long total = c.tp + c.tn + c.fp + c.fn;
  if (total == 0) {
    throw std::invalid_argument("accuracy: undefined for all-zero counts");
  }
  return static_cast<double>(c.tp + c.tn) / total;
}

std::vector<PRPoint> pr_curve(const std::vector<Detection>& dets,
                              const std::vector<bool>& match_flags,
                              std::size_t num_gt) {
  if (dets.size() != match_flags.size()) {
    throw std::invalid_argument("pr_curve: detections/flags length mismatch");
  }
  std::vector<ScoredFlag> flags(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    flags[i] = ScoredFlag{dets[i].confidence, match_flags[i]};
  }
  return pr_curve_from_flags(std::move(flags), num_gt);
}

std::vector<PRPoint> pr_curve_from_flags(std::vector<ScoredFlag> flags,
                                         std::size_t num_gt) {
  std::stable_sort(flags.begin(), flags.end(),
                   [](const ScoredFlag& a, const ScoredFlag& b) {
                     return a.confidence > b.confidence;
                   });
  std::vector<PRPoint> curve;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i].matched) ++tp;
    const bool group_end =
        i + 1 == flags.size() || flags[i + 1].confidence != flags[i].confidence;
    if (group_end) {
      PRPoint pt;
      pt.threshold = flags[i].confidence;
      pt.precision = static_cast<double>(tp) / (i + 1);
      pt.recall = num_gt == 0 ? 0.0 : static_cast<double>(tp) / num_gt;
      curve.push_back(pt);
    }
  }
  return curve;
}

double average_precision(const std::vector<PRPoint>& curve) {
  if (curve.empty()) return 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].recall < curve[i - 1].recall) {
      throw std::invalid_argument("average_precision: recall must be "
                                  "non-decreasing");
    }
  }
  // precision envelope from the right, then sum over recall steps
  std::vector<double> envelope(curve.size());
  double running = 0.0;
  for (std::size_t i = curve.size(); i-- > 0;) {
    running = std::max(running, curve[i].precision);
    envelope[i] = running;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    ap += (curve[i].recall - prev_recall) * envelope[i];
    prev_recall = curve[i].recall;
  }
  return ap;
}

std::vector<MetricsRow> map_over_thresholds(
    const std::vector<Detection>& dets,
    const std::vector<GroundTruthBox>& gts,
    const std::vector<double>& thresholds, int num_classes) {
  std::vector<std::size_t> gt_per_class(static_cast<std::size_t>(num_classes),
                                        0);
  for (const GroundTruthBox& gt : gts) {
    if (gt.class_id < 0 || gt.class_id >= num_classes) {
      throw std::invalid_argument("map_over_thresholds: class id out of "
                                  "range");
    }
    ++gt_per_class[gt.class_id];
  }

  std::vector<MetricsRow> rows;
  for (double thr : thresholds) {
    MetricsRow row;
    row.iou_threshold = thr;

    const MatchResult aggregate = match(dets, gts, thr);
    row.precision = precision(aggregate.counts);
    row.recall = recall(aggregate.counts);
    row.f1 = f1(row.precision, row.recall);

    double ap_sum = 0.0;
    int classes_with_gt = 0;
    for (int c = 0; c < num_classes; ++c) {
      if (gt_per_class[c] == 0) continue;
      ++classes_with_gt;
      std::vector<Detection> class_dets;
      std::vector<GroundTruthBox> class_gts;
      for (const Detection& d : dets) {
        if (d.class_id == c) class_dets.push_back(d);
      }
      for (const GroundTruthBox& g : gts) {
        if (g.class_id == c) class_gts.push_back(g);
      }
      const MatchResult m = match(class_dets, class_gts, thr);
      ap_sum += average_precision(
          pr_curve(class_dets, m.detection_matched, class_gts.size()));
    }
    row.map_value = classes_with_gt == 0 ? 0.0 : ap_sum / classes_with_gt;
    rows.push_back(row);
  }
  return rows;
}

ConfusionCounts binary_image_confusion(
    const std::vector<std::pair<BinaryLabel, BinaryLabel>>& predicted_actual,
    BinaryLabel positive) {
  if (predicted_actual.empty()) {
    throw std::invalid_argument("binary_image_confusion: empty label list");
  }
  ConfusionCounts c;
  for (const auto& [predicted, actual] : predicted_actual) {
    const bool pred_pos = predicted == positive;
    const bool act_pos = actual == positive;
    if (pred_pos && act_pos) ++c.tp;
    else if (pred_pos && !act_pos) ++c.fp;
    else if (!pred_pos && act_pos) ++c.fn;
    else ++c.tn;
  }
  return c;
}

}  // namespace sightline
