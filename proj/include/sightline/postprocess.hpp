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

#include <vector>

#include "sightline/geometry.hpp"

namespace sightline {

// Box confidence: probability an object is present, weighted by how well
// the box localizes it.
double confidence_score(double p_object, double iou_value);

// Keeps detections with confidence strictly greater than the threshold,
// preserving order.
std::vector<Detection> filter_by_score(const std::vector<Detection>& dets,
                                       double score_threshold);

// Greedy non-maximum suppression. Repeatedly emits the highest-confidence
// survivor (ties broken by lower original index) and suppresses remaining
// detections whose overlap with it exceeds iou_threshold. With class_aware
// set, suppression only applies within the same class. Output is in
// emission order, so confidences are non-increasing.
std::vector<Detection> nms(const std::vector<Detection>& dets,
                           double iou_threshold, bool class_aware = true);

}  // namespace sightline
