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
#include "sightline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sightline/postprocess.hpp"
#include "sightline/rng.hpp"

namespace sightline {

namespace {

int nn_source(int dst, int src_size, int dst_size) {
  const double pos = (dst + 0.5) * static_cast<double>(src_size) / dst_size;
  return std::clamp(static_cast<int>(std::floor(pos)), 0, src_size - 1);
}

struct ImageEval {
  std::vector<Detection> detections;  // after score filter + NMS
  std::vector<GroundTruthBox> labels;
};

ImageEval load_image_eval(const DatasetManifest& manifest,
                          const std::filesystem::path& base_dir,
                          const ManifestItem& item,
                          const EvaluationOptions& opts) {
  const int num_classes = static_cast<int>(manifest.class_names.size());
  const auto resolve = [&](const std::string& p) {
    return base_dir / p;
  };

  ImageEval eval;
  try {
    eval.labels = parse_labels(read_file(resolve(item.labels)), num_classes);
  } catch (const std::exception& e) {
    throw std::runtime_error(resolve(item.labels).string() + ": " + e.what());
  }
  try {
    read_ppm(read_file(resolve(item.image)));
  } catch (const std::exception& e) {
    throw std::runtime_error(resolve(item.image).string() + ": " + e.what());
  }
  std::vector<Detection> dets;
  if (!item.detections.empty()) {
    try {
      dets = parse_detections(read_file(resolve(item.detections)),
                              num_classes);
    } catch (const std::exception& e) {
      throw std::runtime_error(resolve(item.detections).string() + ": " +
                               e.what());
    }
  }
  eval.detections =
      nms(filter_by_score(dets, opts.score_cut), opts.nms_iou,
          opts.class_aware);
  return eval;
}

}  // namespace

std::vector<double> preprocess(const ImageBuffer& img,
                               const PreprocessSpec& spec) {
  if (!(spec.sigma > 0.0)) {
    throw std::invalid_argument("preprocess: sigma must be positive");
  }
  if (spec.target_width < 1 || spec.target_height < 1) {
    throw std::invalid_argument("preprocess: target dims must be positive");
  }
  const int tw = spec.target_width;
  const int th = spec.target_height;
  std::vector<double> out(static_cast<std::size_t>(tw) * th * img.channels);
  const std::size_t plane = static_cast<std::size_t>(tw) * th;
  for (int y = 0; y < th; ++y) {
    const int sy = nn_source(y, img.height, th);
    for (int x = 0; x < tw; ++x) {
      const int sx = nn_source(x, img.width, tw);
      for (int c = 0; c < img.channels; ++c) {
        out[plane * c + static_cast<std::size_t>(y) * tw + x] =
            (img.at(sx, sy, c) - spec.mu) / spec.sigma;
      }
    }
  }
  return out;
}

EvaluationReport evaluate_dataset(const DatasetManifest& manifest,
                                  const std::filesystem::path& base_dir,
                                  const EvaluationOptions& opts) {
  if (manifest.items.empty()) {
    throw std::invalid_argument("evaluate_dataset: dataset has no items");
  }
  if (opts.iou_thresholds.empty()) {
    throw std::invalid_argument("evaluate_dataset: no IoU thresholds");
  }
  for (double t : opts.iou_thresholds) {
    if (t < 0.0 || t > 1.0) {
      throw std::invalid_argument("evaluate_dataset: IoU threshold outside "
                                  "[0,1]");
    }
  }
  const int jobs = std::max(1, opts.jobs);
  const int num_classes = static_cast<int>(manifest.class_names.size());

  // per-image load and postprocess, parallel-safe with a slot per image
  std::vector<ImageEval> evals(manifest.items.size());
  if (jobs == 1) {
    for (std::size_t i = 0; i < manifest.items.size(); ++i) {
      evals[i] = load_image_eval(manifest, base_dir, manifest.items[i], opts);
    }
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w]() {
        try {
          for (std::size_t i = w; i < manifest.items.size();
               i += static_cast<std::size_t>(jobs)) {
            evals[i] =
                load_image_eval(manifest, base_dir, manifest.items[i], opts);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : workers) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EvaluationReport report;
  report.images = evals.size();
  for (const ImageEval& e : evals) {
    report.ground_truths += e.labels.size();
    report.detections += e.detections.size();
  }

  std::vector<std::size_t> gt_per_class(static_cast<std::size_t>(num_classes),
                                        0);
  for (const ImageEval& e : evals) {
    for (const GroundTruthBox& gt : e.labels) ++gt_per_class[gt.class_id];
  }

  for (std::size_t ti = 0; ti < opts.iou_thresholds.size(); ++ti) {
    const double thr = opts.iou_thresholds[ti];
    ConfusionCounts counts;
    // per class: pooled (confidence, matched) pairs across images
    std::vector<std::vector<ScoredFlag>> class_flags(
        static_cast<std::size_t>(num_classes));
    for (const ImageEval& e : evals) {
      const MatchResult m = match(e.detections, e.labels, thr);
      counts = counts + m.counts;
      for (std::size_t d = 0; d < e.detections.size(); ++d) {
        class_flags[e.detections[d].class_id].push_back(
            ScoredFlag{e.detections[d].confidence, m.detection_matched[d]});
      }
    }

    MetricsRow row;
    row.iou_threshold = thr;
    row.precision = precision(counts);
    row.recall = recall(counts);
    row.f1 = f1(row.precision, row.recall);

    double ap_sum = 0.0;
    int classes_with_gt = 0;
    std::vector<std::pair<int, double>> per_class;
    for (int c = 0; c < num_classes; ++c) {
      if (gt_per_class[c] == 0) continue;
      ++classes_with_gt;
      const double ap = average_precision(
          pr_curve_from_flags(class_flags[c], gt_per_class[c]));
      ap_sum += ap;
      per_class.emplace_back(c, ap);
    }
    row.map_value = classes_with_gt == 0 ? 0.0 : ap_sum / classes_with_gt;
    report.rows.push_back(row);

    if (ti == 0) {
      report.per_class_ap = std::move(per_class);
      std::vector<ScoredFlag> all_flags;
      for (const auto& cf : class_flags) {
        all_flags.insert(all_flags.end(), cf.begin(), cf.end());
      }
      report.pr = pr_curve_from_flags(std::move(all_flags),
                                      report.ground_truths);
    }
  }
  return report;
}

SynthFrame make_synth_frame(int width, int height, const BenchOptions& opts) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("make_synth_frame: bad resolution");
  }
  const int s = std::clamp(width / 32, 4, 40);
  const int num_classes = 2;
  if (opts.synthetic_boxes < 0 || opts.synthetic_boxes > s * s) {
    throw std::invalid_argument("make_synth_frame: synthetic_boxes exceeds "
                                "grid capacity " + std::to_string(s * s));
  }

  Rng rng(opts.seed ^ (static_cast<std::uint64_t>(width) << 20 ^
                       static_cast<std::uint64_t>(height)));
  SynthFrame frame;
  frame.image = ImageBuffer::filled(width, height, 3, 0.0);
  for (double& p : frame.image.pixels) p = rng.uniform();

  frame.tensor = GridTensor::zeros(s, 2, num_classes);
  for (int i = 0; i < opts.synthetic_boxes; ++i) {
    const int row = i / s;
    const int col = i % s;
    frame.tensor.at(row, col, 0, 0) = 0.5;
    frame.tensor.at(row, col, 0, 1) = 0.5;
    frame.tensor.at(row, col, 0, 2) = 0.5 / s;  // stays inside the cell
    frame.tensor.at(row, col, 0, 3) = 0.5 / s;
    frame.tensor.at(row, col, 0, 4) = 1.0;
    frame.tensor.at(row, col, 0, 5 + (i % num_classes)) = 1.0;
  }
  return frame;
}

namespace {
volatile double g_bench_sink = 0.0;
}

std::vector<Detection> run_frame(const SynthFrame& frame,
                                 const BenchOptions& opts) {
  // the row's resolution is the model input size, so normalization runs
  // at the frame's own dimensions
  PreprocessSpec spec;
  spec.target_width = frame.image.width;
  spec.target_height = frame.image.height;
  spec.mu = 0.5;
  spec.sigma = 0.5;
  const std::vector<double> input = preprocess(frame.image, spec);
  // the planar tensor would feed a network in a full system; decode runs
  // straight off the synthetic grid. The sink keeps the preprocess work
  // observable to the optimizer.
  double checksum = 0.0;
  for (double v : input) checksum += v;
  g_bench_sink = checksum;
  return nms(decode_grid(frame.tensor, opts.decode_threshold), opts.nms_iou,
             true);
}

std::vector<BenchRow> bench(const std::vector<std::pair<int, int>>& resolutions,
                            const BenchOptions& opts) {
  if (opts.iterations < 10) {
    throw std::invalid_argument("bench: need at least 10 iterations");
  }
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (const auto& [w, h] : resolutions) {
    const SynthFrame frame = make_synth_frame(w, h, opts);
    for (int i = 0; i < 3; ++i) {
      volatile std::size_t sink = run_frame(frame, opts).size();
      (void)sink;
    }
    std::vector<double> latencies_ms;
    latencies_ms.reserve(opts.iterations);
    for (int i = 0; i < opts.iterations; ++i) {
      const auto start = clock::now();
      volatile std::size_t sink = run_frame(frame, opts).size();
      (void)sink;
      const auto stop = clock::now();
      latencies_ms.push_back(
          std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(latencies_ms.begin(), latencies_ms.end());
    double sum = 0.0;
    for (double v : latencies_ms) sum += v;
    const auto percentile = [&](double q) {
      const std::size_t n = latencies_ms.size();
      const std::size_t idx = std::min(
          n - 1, static_cast<std::size_t>(std::ceil(q * n)) - 1);
      return latencies_ms[idx];
    };
    BenchRow row;
    row.width = w;
    row.height = h;
    row.iterations = opts.iterations;
    row.mean_ms = sum / latencies_ms.size();
    row.p50_ms = percentile(0.50);
    row.p95_ms = percentile(0.95);
    row.fps = row.mean_ms > 0.0 ? 1000.0 / row.mean_ms : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = "iou_threshold,precision,recall,f1,map\n";
  char line[160];
  for (const MetricsRow& r : rows) {
    std::snprintf(line, sizeof(line), "%.2f,%.6f,%.6f,%.6f,%.6f\n",
                  r.iou_threshold, r.precision, r.recall, r.f1, r.map_value);
    out += line;
  }
  return out;
}

std::string pr_csv(const std::vector<PRPoint>& curve) {
  std::string out = "threshold,precision,recall\n";
  char line[128];
  for (const PRPoint& p : curve) {
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f\n", p.threshold,
                  p.precision, p.recall);
    out += line;
  }
  return out;
}

std::string per_class_ap_csv(
    const std::vector<std::pair<int, double>>& per_class_ap,
    const std::vector<std::string>& class_names) {
  std::string out = "class_id,class_name,ap\n";
  char line[192];
  for (const auto& [id, ap] : per_class_ap) {
    const std::string name =
        id >= 0 && static_cast<std::size_t>(id) < class_names.size()
            ? class_names[id]
            : std::string("?");
    std::snprintf(line, sizeof(line), "%d,%s,%.6f\n", id, name.c_str(), ap);
    out += line;
  }
  return out;
}

std::string evaluation_report_json(
    const EvaluationReport& report,
    const std::vector<std::string>& class_names) {
  nlohmann::json doc;
  doc["images"] = report.images;
  doc["ground_truths"] = report.ground_truths;
  doc["detections"] = report.detections;
  doc["rows"] = nlohmann::json::array();
  for (const MetricsRow& r : report.rows) {
    doc["rows"].push_back({{"iou_threshold", r.iou_threshold},
                           {"precision", r.precision},
                           {"recall", r.recall},
                           {"f1", r.f1},
                           {"map", r.map_value}});
  }
  doc["per_class_ap"] = nlohmann::json::array();
  for (const auto& [id, ap] : report.per_class_ap) {
    nlohmann::json entry = {{"class_id", id}, {"ap", ap}};
    if (id >= 0 && static_cast<std::size_t>(id) < class_names.size()) {
      entry["class_name"] = class_names[id];
    }
    doc["per_class_ap"].push_back(entry);
  }
  doc["pr_curve"] = nlohmann::json::array();
  for (const PRPoint& p : report.pr) {
    doc["pr_curve"].push_back({{"threshold", p.threshold},
                               {"precision", p.precision},
                               {"recall", p.recall}});
  }
  return doc.dump(2) + "\n";
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "width,height,iterations,mean_ms,p50_ms,p95_ms,fps\n";
  char line[192];
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof(line), "%d,%d,%d,%.4f,%.4f,%.4f,%.2f\n",
                  r.width, r.height, r.iterations, r.mean_ms, r.p50_ms,
                  r.p95_ms, r.fps);
    out += line;
  }
  return out;
}

}  // namespace sightline
