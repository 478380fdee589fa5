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
#include "sightline/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace sightline {

namespace {

void check_shapes(const GridTensor& pred, const TargetTensor& target,
                  const LossWeights& w) {
  const GridTensor& g = target.grid;
  if (pred.s != g.s || pred.b != g.b || pred.num_classes != g.num_classes) {
    throw std::invalid_argument("loss: prediction/target shape mismatch");
  }
  if (pred.values.size() != pred.expected_size() ||
      g.values.size() != g.expected_size()) {
    throw std::invalid_argument("loss: tensor length mismatch");
  }
  if (target.mask.size() !=
      static_cast<std::size_t>(g.s) * g.s * g.b) {
    throw std::invalid_argument("loss: mask length mismatch");
  }
  if (!(w.lambda_coord >= 0.0) || !(w.lambda_noobj >= 0.0) ||
      !std::isfinite(w.lambda_coord) || !std::isfinite(w.lambda_noobj)) {
    throw std::invalid_argument("loss: weights must be finite and >= 0");
  }
}

}  // namespace

TargetTensor TargetTensor::zeros(int s, int b, int num_classes) {
  TargetTensor t;
  t.grid = GridTensor::zeros(s, b, num_classes);
  t.mask.assign(static_cast<std::size_t>(s) * s * b, 0);
  return t;
}

LossBreakdown loss(const GridTensor& pred, const TargetTensor& target,
                   const LossWeights& w) {
  check_shapes(pred, target, w);
  LossBreakdown out;
  for (int row = 0; row < pred.s; ++row) {
    for (int col = 0; col < pred.s; ++col) {
      for (int k = 0; k < pred.b; ++k) {
        if (target.responsible(row, col, k)) {
          for (int ch = 0; ch < 4; ++ch) {
            const double d =
                pred.at(row, col, k, ch) - target.grid.at(row, col, k, ch);
            out.coord += d * d;
          }
          for (int c = 0; c < pred.num_classes; ++c) {
            const double d = pred.at(row, col, k, 5 + c) -
                             target.grid.at(row, col, k, 5 + c);
            out.class_term += d * d;
          }
        } else {
          const double conf = pred.at(row, col, k, 4);
          out.noobj += conf * conf;
        }
      }
    }
  }
  out.total =
      w.lambda_coord * out.coord + w.lambda_noobj * out.noobj + out.class_term;
  return out;
}

std::vector<double> loss_gradient(const GridTensor& pred,
                                  const TargetTensor& target,
                                  const LossWeights& w) {
  check_shapes(pred, target, w);
  std::vector<double> grad(pred.values.size(), 0.0);
  for (int row = 0; row < pred.s; ++row) {
    for (int col = 0; col < pred.s; ++col) {
      for (int k = 0; k < pred.b; ++k) {
        if (target.responsible(row, col, k)) {
          for (int ch = 0; ch < 4; ++ch) {
            const std::size_t idx = pred.index(row, col, k, ch);
            grad[idx] = 2.0 * w.lambda_coord *
                        (pred.values[idx] - target.grid.values[idx]);
          }
          for (int c = 0; c < pred.num_classes; ++c) {
            const std::size_t idx = pred.index(row, col, k, 5 + c);
            grad[idx] = 2.0 * (pred.values[idx] - target.grid.values[idx]);
          }
        } else {
          const std::size_t idx = pred.index(row, col, k, 4);
          grad[idx] = 2.0 * w.lambda_noobj * pred.values[idx];
        }
      }
    }
  }
  return grad;
}

}  // namespace sightline
