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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sightline/augment.hpp"
#include "sightline/geometry.hpp"

namespace sightline {

// Structured rejection of malformed input. `location` is a 1-based line
// number for line-oriented formats and a byte offset for binary ones;
// the message always spells out which.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t location)
      : std::runtime_error(message), location_(location) {}
  std::size_t location() const { return location_; }

 private:
  std::size_t location_;
};

// Label file: one `class_id cx cy w h` per line, values in [0,1], single
// spaces, LF endings. Blank lines and lines starting with '#' are skipped.
// num_classes < 0 disables the class-bound check.
std::vector<GroundTruthBox> parse_labels(std::string_view text,
                                         int num_classes = -1);
std::string write_labels(const std::vector<GroundTruthBox>& boxes);

// Detection file: `class_id confidence cx cy w h` per line.
std::vector<Detection> parse_detections(std::string_view text,
                                        int num_classes = -1);
std::string write_detections(const std::vector<Detection>& dets);

// Binary P6 pixmap, maxval 255. Pixels map to [0,1] via v/255 on read and
// round(v*255) on write.
ImageBuffer read_ppm(std::string_view bytes);
std::string write_ppm(const ImageBuffer& img);

// JSON document with keys s, b, num_classes and a flat values array,
// validated against the S*S*B*(5+C) length rule and [0,1] channel ranges.
GridTensor read_tensor(std::string_view text);
std::string write_tensor(const GridTensor& t);

struct ManifestItem {
  std::string image;
  std::string labels;
  std::string detections;  // optional; empty means none recorded
};

struct DatasetManifest {
  std::vector<std::string> class_names;
  std::vector<ManifestItem> items;
};

// JSON document: {"classes": [...], "items": [{"image":..., "labels":...,
// "detections":...}, ...]} with detections optional per item.
DatasetManifest parse_manifest(std::string_view text);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file and renames, so the target is never
// observed half-written.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace sightline
