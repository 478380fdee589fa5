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
#include <vector>

#include "sightline/geometry.hpp"

namespace sightline {

struct LossWeights {
  double lambda_coord = 5.0;
  double lambda_noobj = 0.5;
};

// Training target with the same layout as a GridTensor plus a per-(cell,box)
// responsibility mask. Masked predictors carry target coordinates and a
// one-hot class vector; unmasked predictors are penalized on confidence only.
struct TargetTensor {
  GridTensor grid;
  std::vector<std::uint8_t> mask;  // s*s*b entries, row-major by (row,col,box)

  static TargetTensor zeros(int s, int b, int num_classes);

  std::size_t mask_index(int row, int col, int box) const {
    return (static_cast<std::size_t>(row) * grid.s + col) * grid.b + box;
  }
  bool responsible(int row, int col, int box) const {
    return mask[mask_index(row, col, box)] != 0;
  }
  void set_responsible(int row, int col, int box, bool on) {
    mask[mask_index(row, col, box)] = on ? 1 : 0;
  }
};

struct LossBreakdown {
  double coord = 0.0;
  double noobj = 0.0;
  double class_term = 0.0;
  double total = 0.0;
};

// Sum-of-squares detection loss:
//   coord      = sum over masked boxes of (dx^2 + dy^2 + dw^2 + dh^2)
//   noobj      = sum over unmasked boxes of predicted confidence squared
//   class_term = sum over masked boxes of squared class-probability error
//   total      = lambda_coord * coord + lambda_noobj * noobj + class_term
// Throws std::invalid_argument on shape mismatch.
LossBreakdown loss(const GridTensor& pred, const TargetTensor& target,
                   const LossWeights& w);

// d(total)/d(v) for every prediction channel, same layout as pred.values.
std::vector<double> loss_gradient(const GridTensor& pred,
                                  const TargetTensor& target,
                                  const LossWeights& w);

}  // namespace sightline
