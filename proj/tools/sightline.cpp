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
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sightline/ingest.hpp"
#include "sightline/pipeline.hpp"
#include "sightline/postprocess.hpp"
#include "sightline/report.hpp"
#include "sightline/rng.hpp"
#include "sightline/trainer.hpp"

namespace fs = std::filesystem;
using namespace sightline;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed_flag) {
  if (seed_given) return seed_flag;
  if (const char* env = std::getenv("SIGHTLINE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw std::invalid_argument("SIGHTLINE_SEED is not an integer");
    }
    return v;
  }
  return 0;
}

std::vector<double> parse_threshold_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok = comma == std::string::npos
                                ? text.substr(start)
                                : text.substr(start, comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad threshold '" + tok + "'");
    }
    if (used != tok.size() || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("bad threshold '" + tok + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty threshold list");
  return out;
}

std::vector<std::pair<int, int>> parse_resolutions(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok = comma == std::string::npos
                                ? text.substr(start)
                                : text.substr(start, comma - start);
    const std::size_t x = tok.find('x');
    int w = 0, h = 0;
    if (x != std::string::npos) {
      try {
        w = std::stoi(tok.substr(0, x));
        h = std::stoi(tok.substr(x + 1));
      } catch (const std::exception&) {
        w = 0;
      }
    }
    if (w < 1 || h < 1) {
      throw std::invalid_argument("bad resolution '" + tok +
                                  "' (expected WxH)");
    }
    out.emplace_back(w, h);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty resolution list");
  return out;
}

int run_eval(const std::string& manifest_path, const std::string& thresholds,
             double nms_iou, double score_cut, bool class_aware, int jobs,
             const std::string& out_dir) {
  const fs::path mpath(manifest_path);
  const DatasetManifest manifest = parse_manifest(read_file(mpath));
  EvaluationOptions opts;
  opts.iou_thresholds = parse_threshold_list(thresholds);
  opts.nms_iou = nms_iou;
  opts.score_cut = score_cut;
  opts.class_aware = class_aware;
  opts.jobs = jobs;

  const EvaluationReport report =
      evaluate_dataset(manifest, mpath.parent_path(), opts);

  const std::string metrics = metrics_csv(report.rows);
  const std::string pr = pr_csv(report.pr);
  const std::string per_class =
      per_class_ap_csv(report.per_class_ap, manifest.class_names);
  std::string svg;
  if (report.pr.empty()) {
    svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" "
          "height=\"480\"><!-- no detections --></svg>\n";
  } else {
    PlotSeries series;
    series.name = "PR";
    series.x_label = "recall";
    series.y_label = "precision";
    for (const PRPoint& p : report.pr) {
      series.points.emplace_back(p.recall, p.precision);
    }
    svg = render_svg({series}, {0.0, 1.0}, {0.0, 1.0}, 480);
  }

  const fs::path out(out_dir);
  fs::create_directories(out);
  write_file_atomic(out / "metrics.csv", metrics);
  write_file_atomic(out / "pr_curve.csv", pr);
  write_file_atomic(out / "pr_curve.svg", svg);
  write_file_atomic(out / "per_class_ap.csv", per_class);
  write_file_atomic(out / "report.json",
                    evaluation_report_json(report, manifest.class_names));
  return 0;
}

int run_nms(const std::string& in_path, double iou_thr, double score,
            bool class_aware) {
  const std::vector<Detection> dets = parse_detections(read_file(in_path));
  const std::vector<Detection> kept =
      nms(filter_by_score(dets, score), iou_thr, class_aware);
  std::fputs(write_detections(kept).c_str(), stdout);
  return 0;
}

int run_augment(const std::string& image_path, const std::string& labels_path,
                CLI::App* cmd, double theta_deg, double scale_factor,
                bool flip, double brightness, double contrast,
                double saturation, double retention, bool seed_given,
                std::uint64_t seed_flag, const std::string& out_prefix) {
  const ImageBuffer img = read_ppm(read_file(image_path));
  const std::vector<GroundTruthBox> boxes =
      parse_labels(read_file(labels_path));

  AugmentationSpec spec;
  if (cmd->count("--theta") == 0 && (seed_given || std::getenv("SIGHTLINE_SEED"))) {
    Rng rng(resolve_seed(seed_given, seed_flag));
    spec.theta = rng.uniform(-30.0, 30.0) * kPi / 180.0;
  } else {
    spec.theta = theta_deg * kPi / 180.0;
  }
  spec.scale = scale_factor;
  spec.hflip = flip;
  spec.brightness = brightness;
  spec.contrast = contrast;
  spec.saturation = saturation;
  spec.min_box_retention = retention;

  const Augmented result = compose(img, boxes, spec);
  write_file_atomic(out_prefix + ".ppm", write_ppm(result.image));
  write_file_atomic(out_prefix + ".txt", write_labels(result.boxes));
  return 0;
}

int run_decode(const std::string& tensor_path, double threshold) {
  const GridTensor t = read_tensor(read_file(tensor_path));
  std::fputs(write_detections(decode_grid(t, threshold)).c_str(), stdout);
  return 0;
}

// Fixed fit-the-target problem: a 2x2 grid with two responsible predictors.
TargetTensor toy_target() {
  TargetTensor t = TargetTensor::zeros(2, 1, 2);
  t.set_responsible(0, 0, 0, true);
  t.grid.at(0, 0, 0, 0) = 0.3;
  t.grid.at(0, 0, 0, 1) = 0.6;
  t.grid.at(0, 0, 0, 2) = 0.25;
  t.grid.at(0, 0, 0, 3) = 0.25;
  t.grid.at(0, 0, 0, 5) = 1.0;
  t.set_responsible(1, 1, 0, true);
  t.grid.at(1, 1, 0, 0) = 0.7;
  t.grid.at(1, 1, 0, 1) = 0.4;
  t.grid.at(1, 1, 0, 2) = 0.5;
  t.grid.at(1, 1, 0, 3) = 0.125;
  t.grid.at(1, 1, 0, 6) = 1.0;
  return t;
}

int run_train_toy(int epochs, double lr, int patience, double decay_factor,
                  int decay_every, double lambda_coord, double lambda_noobj,
                  bool seed_given, std::uint64_t seed_flag,
                  const std::string& out_csv,
                  const std::string& save_params) {
  TrainConfig cfg;
  cfg.learning_rate = lr;
  cfg.total_epochs = epochs;
  cfg.patience = patience;
  cfg.lr_decay_factor = decay_factor;
  cfg.lr_decay_every = decay_every;
  cfg.weights.lambda_coord = lambda_coord;
  cfg.weights.lambda_noobj = lambda_noobj;
  cfg.seed = resolve_seed(seed_given, seed_flag);

  const std::vector<TargetTensor> train_set = {toy_target()};
  const std::vector<TargetTensor> val_set = {toy_target()};
  const TrainResult result = train(train_set, val_set, cfg);

  write_file_atomic(out_csv, train_records_csv(result.records));
  if (!save_params.empty()) {
    write_file_atomic(save_params, write_tensor(result.params));
  }
  if (!result.records.empty()) {
    const TrainRecord& last = result.records.back();
    std::printf("epochs_run=%zu final_train_loss=%.9g final_val_loss=%.9g\n",
                result.records.size(), last.train_loss, last.val_loss);
  } else {
    std::printf("epochs_run=0\n");
  }
  return 0;
}

int run_bench(const std::string& resolutions, int iterations, int boxes,
              bool seed_given, std::uint64_t seed_flag,
              const std::string& out_csv) {
  BenchOptions opts;
  opts.iterations = iterations;
  opts.synthetic_boxes = boxes;
  opts.seed = resolve_seed(seed_given, seed_flag);
  if (opts.seed == 0) opts.seed = 1;
  const std::vector<BenchRow> rows =
      bench(parse_resolutions(resolutions), opts);
  const std::string csv = bench_csv(rows);
  if (out_csv.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file_atomic(out_csv, csv);
  }
  return 0;
}

int run_confusion(long long tp, long long tn, long long fp, long long fn,
                  const std::string& positive, const std::string& negative) {
  if (tp < 0 || tn < 0 || fp < 0 || fn < 0) {
    throw std::invalid_argument("confusion counts must be non-negative");
  }
  ConfusionCounts c;
  c.tp = tp;
  c.tn = tn;
  c.fp = fp;
  c.fn = fn;
  std::fputs(render_confusion_table(c, positive, negative).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sightline: detection post-processing, evaluation, "
               "augmentation, and benchmarking"};
  app.require_subcommand(1);

  // eval
  auto* eval_cmd = app.add_subcommand(
      "eval", "Evaluate a detection dataset against its labels");
  std::string manifest_path, out_dir;
  std::string thresholds = "0.50,0.55,0.60,0.65,0.70";
  double nms_iou = 0.5, score_cut = 0.0;
  bool class_aware = true;
  int jobs = 1;
  eval_cmd->add_option("--manifest", manifest_path, "Dataset manifest (JSON)")
      ->required();
  eval_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  eval_cmd->add_option("--iou-thresholds", thresholds,
                       "Comma-separated IoU sweep");
  eval_cmd->add_option("--nms-iou", nms_iou, "NMS IoU threshold");
  eval_cmd->add_option("--score-cut", score_cut,
                       "Confidence filter before NMS");
  eval_cmd->add_option("--class-aware", class_aware,
                       "Suppress only within the same class");
  eval_cmd->add_option("--jobs", jobs, "Parallel image workers");

  // nms
  auto* nms_cmd =
      app.add_subcommand("nms", "Filter a detection file and print survivors");
  std::string nms_in;
  double nms_thr = 0.5, nms_score = 0.0;
  bool nms_class_aware = true;
  nms_cmd->add_option("--in", nms_in, "Detection file")->required();
  nms_cmd->add_option("--iou", nms_thr, "Suppression IoU threshold");
  nms_cmd->add_option("--score", nms_score, "Confidence filter");
  nms_cmd->add_option("--class-aware", nms_class_aware,
                      "Suppress only within the same class");

  // augment
  auto* aug_cmd = app.add_subcommand(
      "augment", "Transform an image and its label file together");
  std::string aug_image, aug_labels, aug_prefix;
  double theta_deg = 0.0, scale_factor = 1.0;
  double brightness = 1.0, contrast = 1.0, saturation = 1.0;
  double retention = 0.25;
  bool flip = false;
  std::uint64_t aug_seed = 0;
  aug_cmd->add_option("--image", aug_image, "Input P6 image")->required();
  aug_cmd->add_option("--labels", aug_labels, "Input label file")->required();
  aug_cmd->add_option("--out-prefix", aug_prefix,
                      "Writes <prefix>.ppm and <prefix>.txt")
      ->required();
  aug_cmd->add_option("--theta", theta_deg,
                      "Rotation in degrees; sampled from [-30,30] when a "
                      "seed is set and --theta is absent");
  aug_cmd->add_option("--scale", scale_factor, "Scale factor");
  aug_cmd->add_flag("--hflip", flip, "Mirror horizontally");
  aug_cmd->add_option("--brightness", brightness, "Brightness factor");
  aug_cmd->add_option("--contrast", contrast, "Contrast factor");
  aug_cmd->add_option("--saturation", saturation, "Saturation factor");
  aug_cmd->add_option("--min-retention", retention,
                      "Minimum surviving box area fraction");
  auto* aug_seed_opt =
      aug_cmd->add_option("--seed", aug_seed, "Sampling seed");

  // decode
  auto* decode_cmd =
      app.add_subcommand("decode", "Decode a grid tensor into detections");
  std::string tensor_path;
  double decode_threshold = 0.5;
  decode_cmd->add_option("--tensor", tensor_path, "Tensor file (JSON)")
      ->required();
  decode_cmd->add_option("--threshold", decode_threshold,
                         "Confidence threshold");

  // train-toy
  auto* train_cmd = app.add_subcommand(
      "train-toy", "Gradient-descent fit of the bundled toy problem");
  int epochs = 500, patience = 10, decay_every = 10;
  double lr = 0.05, decay_factor = 1.0;
  double lambda_coord = 5.0, lambda_noobj = 0.5;
  std::uint64_t train_seed = 0;
  std::string train_out, save_params;
  train_cmd->add_option("--out", train_out, "Training record CSV")->required();
  train_cmd->add_option("--epochs", epochs, "Epoch budget");
  train_cmd->add_option("--lr", lr, "Learning rate");
  train_cmd->add_option("--patience", patience, "Early-stopping patience");
  train_cmd->add_option("--lr-decay-factor", decay_factor,
                        "Step-decay factor");
  train_cmd->add_option("--lr-decay-every", decay_every,
                        "Epochs between decays");
  train_cmd->add_option("--lambda-coord", lambda_coord,
                        "Coordinate loss weight");
  train_cmd->add_option("--lambda-noobj", lambda_noobj,
                        "No-object loss weight");
  auto* train_seed_opt =
      train_cmd->add_option("--seed", train_seed, "Parameter init seed");
  train_cmd->add_option("--save-params", save_params,
                        "Write fitted tensor (JSON)");

  // bench
  auto* bench_cmd = app.add_subcommand(
      "bench", "Time the frame path over synthetic inputs");
  std::string resolutions = "320x320,640x640,1280x1280";
  int iterations = 50, boxes = 64;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  bench_cmd->add_option("--resolutions", resolutions,
                        "Comma-separated WxH list");
  bench_cmd->add_option("--iterations", iterations, "Timed runs (>= 10)");
  bench_cmd->add_option("--boxes", boxes, "Synthetic boxes per frame");
  auto* bench_seed_opt =
      bench_cmd->add_option("--seed", bench_seed, "Input generation seed");
  bench_cmd->add_option("--out", bench_out, "CSV path (stdout when absent)");

  // confusion
  auto* conf_cmd = app.add_subcommand(
      "confusion", "Derived metrics for a 2x2 confusion matrix");
  long long tp = 0, tn = 0, fp = 0, fn = 0;
  std::string positive = "weapon", negative = "no-weapon";
  conf_cmd->add_option("--tp", tp, "True positives")->required();
  conf_cmd->add_option("--tn", tn, "True negatives")->required();
  conf_cmd->add_option("--fp", fp, "False positives")->required();
  conf_cmd->add_option("--fn", fn, "False negatives")->required();
  conf_cmd->add_option("--positive", positive, "Positive class name");
  conf_cmd->add_option("--negative", negative, "Negative class name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (eval_cmd->parsed()) {
      return run_eval(manifest_path, thresholds, nms_iou, score_cut,
                      class_aware, jobs, out_dir);
    }
    if (nms_cmd->parsed()) {
      return run_nms(nms_in, nms_thr, nms_score, nms_class_aware);
    }
    if (aug_cmd->parsed()) {
      return run_augment(aug_image, aug_labels, aug_cmd, theta_deg,
                         scale_factor, flip, brightness, contrast, saturation,
                         retention, aug_seed_opt->count() > 0, aug_seed,
                         aug_prefix);
    }
    if (decode_cmd->parsed()) {
      return run_decode(tensor_path, decode_threshold);
    }
    if (train_cmd->parsed()) {
      return run_train_toy(epochs, lr, patience, decay_factor, decay_every,
                           lambda_coord, lambda_noobj,
                           train_seed_opt->count() > 0, train_seed, train_out,
                           save_params);
    }
    if (bench_cmd->parsed()) {
      return run_bench(resolutions, iterations, boxes,
                       bench_seed_opt->count() > 0, bench_seed, bench_out);
    }
    if (conf_cmd->parsed()) {
      return run_confusion(tp, tn, fp, fn, positive, negative);
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 1;
}
