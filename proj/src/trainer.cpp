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
#include "sightline/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "sightline/rng.hpp"

namespace sightline {

namespace {

constexpr double kImprovementEps = 1e-12;

void validate_config(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) {
    throw std::invalid_argument("train: learning_rate must be positive");
  }
  if (cfg.total_epochs < 0) {
    throw std::invalid_argument("train: total_epochs must be >= 0");
  }
  if (cfg.patience < 1) {
    throw std::invalid_argument("train: patience must be >= 1");
  }
  if (cfg.total_epochs > 0 && cfg.patience > cfg.total_epochs) {
    throw std::invalid_argument("train: patience exceeds total_epochs");
  }
  if (!(cfg.lr_decay_factor > 0.0) || cfg.lr_decay_factor > 1.0) {
    throw std::invalid_argument("train: lr_decay_factor outside (0,1]");
  }
  if (cfg.lr_decay_every < 1) {
    throw std::invalid_argument("train: lr_decay_every must be >= 1");
  }
}

double mean_loss(const GridTensor& params,
                 const std::vector<TargetTensor>& set, const LossWeights& w) {
  double sum = 0.0;
  for (const TargetTensor& t : set) sum += loss(params, t, w).total;
  return sum / set.size();
}

}  // namespace

std::vector<double> sgd_step(const std::vector<double>& params,
                             const std::vector<double>& grads, double eta) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("sgd_step: parameter/gradient length mismatch");
  }
  std::vector<double> out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    out[i] = params[i] - eta * grads[i];
  }
  return out;
}

double lr_at(int epoch, const TrainConfig& cfg) {
  if (epoch < 0) throw std::invalid_argument("lr_at: negative epoch");
  double rate = cfg.learning_rate;
  const int steps = epoch / cfg.lr_decay_every;
  for (int i = 0; i < steps; ++i) rate *= cfg.lr_decay_factor;
  return rate;
}

TrainResult train(const std::vector<TargetTensor>& train_set,
                  const std::vector<TargetTensor>& val_set,
                  const TrainConfig& cfg) {
  validate_config(cfg);
  if (train_set.empty() || val_set.empty()) {
    throw std::invalid_argument("train: training and validation sets must be "
                                "non-empty");
  }
  const GridTensor& shape = train_set[0].grid;

  GridTensor params = GridTensor::zeros(shape.s, shape.b, shape.num_classes);
  Rng rng(cfg.seed);
  for (double& v : params.values) v = rng.uniform();

  TrainResult result;
  result.params = params;
  double best_val = std::numeric_limits<double>::infinity();
  int epochs_without_improvement = 0;

  for (int epoch = 0; epoch < cfg.total_epochs; ++epoch) {
    const double eta = lr_at(epoch, cfg);

    double train_loss = 0.0;
    std::vector<double> grad(params.values.size(), 0.0);
    for (const TargetTensor& t : train_set) {
      train_loss += loss(params, t, cfg.weights).total;
      const std::vector<double> g = loss_gradient(params, t, cfg.weights);
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g[i];
    }
    train_loss /= train_set.size();
    for (double& g : grad) g /= train_set.size();
    if (!std::isfinite(train_loss)) {
      throw std::runtime_error("train: diverged (non-finite training loss at "
                               "epoch " + std::to_string(epoch) + ")");
    }

    params.values = sgd_step(params.values, grad, eta);

    const double val_loss = mean_loss(params, val_set, cfg.weights);
    if (!std::isfinite(val_loss)) {
      throw std::runtime_error("train: diverged (non-finite validation loss "
                               "at epoch " + std::to_string(epoch) + ")");
    }
    result.records.push_back(TrainRecord{epoch, train_loss, val_loss, eta});

    if (val_loss < best_val - kImprovementEps) {
      best_val = val_loss;
      result.params = params;
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
      if (epochs_without_improvement >= cfg.patience) break;
    }
  }
  return result;
}

std::string train_records_csv(const std::vector<TrainRecord>& records) {
  std::string out = "epoch,train_loss,val_loss,lr\n";
  char line[160];
  for (const TrainRecord& r : records) {
    std::snprintf(line, sizeof(line), "%d,%.9g,%.9g,%.9g\n", r.epoch,
                  r.train_loss, r.val_loss, r.learning_rate_used);
    out += line;
  }
  return out;
}

}  // namespace sightline
