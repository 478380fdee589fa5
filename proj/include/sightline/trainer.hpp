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
#include <string>
#include <vector>

#include "sightline/loss.hpp"

namespace sightline {

struct TrainConfig {
  double learning_rate = 0.05;
  int total_epochs = 200;
  int patience = 10;
  double lr_decay_factor = 1.0;  // 1.0 keeps the rate constant
  int lr_decay_every = 10;
  LossWeights weights;
  std::uint64_t seed = 0;
};

struct TrainRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double learning_rate_used = 0.0;
};

// Elementwise params - eta * grads. Throws on length mismatch.
std::vector<double> sgd_step(const std::vector<double>& params,
                             const std::vector<double>& grads, double eta);

// Step-decay schedule: base * factor^floor(epoch / every).
double lr_at(int epoch, const TrainConfig& cfg);

struct TrainResult {
  GridTensor params;               // from the best-validation epoch
  std::vector<TrainRecord> records;
};

// Full-batch gradient descent on a free prediction tensor (the trainable
// stand-in for a network). Per epoch: mean loss and gradient over the
// training targets, one descent step, then mean validation loss. Stops
// early once validation loss has gone `patience` consecutive epochs
// without improving (strict decrease beyond 1e-12). Throws
// std::runtime_error if the loss stops being finite.
TrainResult train(const std::vector<TargetTensor>& train_set,
                  const std::vector<TargetTensor>& val_set,
                  const TrainConfig& cfg);

// CSV with header epoch,train_loss,val_loss,lr; floats at 9 significant
// digits.
std::string train_records_csv(const std::vector<TrainRecord>& records);

}  // namespace sightline
