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

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sightline/augment.hpp"
#include "sightline/ingest.hpp"
#include "sightline/metrics.hpp"

namespace sightline {

struct PreprocessSpec {
  int target_width = 640;
  int target_height = 640;
  double mu = 0.0;     // mean pixel value subtracted after resize
  double sigma = 1.0;  // divisor, must be positive
};

// Nearest-neighbor resize to the target dims, then (v - mu) / sigma.
// Output is channel-planar: all of channel 0, then channel 1, ...
std::vector<double> preprocess(const ImageBuffer& img,
                               const PreprocessSpec& spec);

struct EvaluationOptions {
  std::vector<double> iou_thresholds = {0.50, 0.55, 0.60, 0.65, 0.70};
  double nms_iou = 0.5;
  double score_cut = 0.0;
  bool class_aware = true;
  int jobs = 1;
};

struct EvaluationReport {
  std::vector<MetricsRow> rows;                    // one per IoU threshold
  std::vector<PRPoint> pr;                         // at the first threshold
  std::vector<std::pair<int, double>> per_class_ap;  // at the first threshold
  std::size_t images = 0;
  std::size_t ground_truths = 0;
  std::size_t detections = 0;
};

// Loads every manifest item (paths resolved against base_dir), runs the
// score filter and NMS per image, matches against the labels, and
// aggregates counts and pooled PR data across images. Throws on the first
// file that fails to load or parse, naming it.
EvaluationReport evaluate_dataset(const DatasetManifest& manifest,
                                  const std::filesystem::path& base_dir,
                                  const EvaluationOptions& opts);

struct BenchOptions {
  int iterations = 50;        // timed runs per resolution, after 3 warm-ups
  int synthetic_boxes = 64;
  std::uint64_t seed = 1;
  double decode_threshold = 0.5;
  double nms_iou = 0.5;
};

struct BenchRow {
  int width = 0;
  int height = 0;
  int iterations = 0;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double fps = 0.0;
};

struct SynthFrame {
  ImageBuffer image;
  GridTensor tensor;
};

// Deterministic synthetic input for one resolution: seeded noise image and
// a grid tensor carrying synthetic_boxes non-overlapping unit-confidence
// boxes, one per cell.
SynthFrame make_synth_frame(int width, int height, const BenchOptions& opts);

// The measured frame path: preprocess + decode + NMS.
std::vector<Detection> run_frame(const SynthFrame& frame,
                                 const BenchOptions& opts);

// Times the frame path per resolution; single-threaded on purpose so the
// latency distribution stays clean. Requires iterations >= 10.
std::vector<BenchRow> bench(const std::vector<std::pair<int, int>>& resolutions,
                            const BenchOptions& opts);

// CSV emitters for the evaluation and bench reports.
std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::string pr_csv(const std::vector<PRPoint>& curve);
std::string per_class_ap_csv(
    const std::vector<std::pair<int, double>>& per_class_ap,
    const std::vector<std::string>& class_names);
std::string bench_csv(const std::vector<BenchRow>& rows);

// The whole evaluation as one structured JSON document (deterministic key
// order and number formatting).
std::string evaluation_report_json(const EvaluationReport& report,
                                   const std::vector<std::string>& class_names);

}  // namespace sightline
