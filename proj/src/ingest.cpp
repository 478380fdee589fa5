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
#include "sightline/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sightline {

namespace {

constexpr double kRangeTol = 1e-9;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(' ') == std::string_view::npos;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t sp = line.find(' ', start);
    if (sp == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, sp - start));
    start = sp + 1;
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t line_no,
                  std::string_view name) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": " +
                         std::string(name) + " is not a number",
                     line_no);
  }
  return value;
}

double parse_unit_real(std::string_view field, std::size_t line_no,
                       std::string_view name) {
  const double value = parse_real(field, line_no, name);
  if (value < -kRangeTol || value > 1.0 + kRangeTol) {
    throw ParseError("line " + std::to_string(line_no) + ": " +
                         std::string(name) + " out of range [0,1]",
                     line_no);
  }
  return std::clamp(value, 0.0, 1.0);
}

int parse_class_id(std::string_view field, std::size_t line_no,
                   int num_classes) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line_no) +
                         ": class_id is not an integer",
                     line_no);
  }
  if (value < 0 || (num_classes >= 0 && value >= num_classes)) {
    throw ParseError("line " + std::to_string(line_no) +
                         ": class_id out of range",
                     line_no);
  }
  return value;
}

void append_box_fields(std::string& out, const BoundingBox& box) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %.6f", box.cx, box.cy,
                box.w, box.h);
  out += buf;
}

// PPM header scanner: whitespace-separated unsigned ints, with '#' comments
// running to end of line.
class PpmScanner {
 public:
  PpmScanner(std::string_view bytes, std::size_t pos)
      : bytes_(bytes), pos_(pos) {}

  unsigned next_uint(std::string_view name) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9')
      ++pos_;
    if (pos_ == start) {
      throw ParseError("ppm: missing " + std::string(name) + " at byte " +
                           std::to_string(pos_),
                       pos_);
    }
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(bytes_.data() + start,
                                           bytes_.data() + pos_, value);
    if (ec != std::errc{} || ptr != bytes_.data() + pos_) {
      throw ParseError("ppm: bad " + std::string(name) + " at byte " +
                           std::to_string(start),
                       start);
    }
    return value;
  }

  // exactly one whitespace byte separates the header from the payload
  std::size_t payload_start() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw ParseError("ppm: missing whitespace before payload at byte " +
                           std::to_string(pos_),
                       pos_);
    }
    return pos_ + 1;
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_;
};

nlohmann::json parse_json(std::string_view text, std::string_view what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": invalid JSON at byte " +
                         std::to_string(e.byte) + " (" + e.what() + ")",
                     e.byte);
  }
}

}  // namespace

std::vector<GroundTruthBox> parse_labels(std::string_view text,
                                         int num_classes) {
  std::vector<GroundTruthBox> boxes;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t line_no = i + 1;
    if (is_blank(line) || line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw ParseError("line " + std::to_string(line_no) +
                           ": expected 5 fields (class_id cx cy w h), got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    GroundTruthBox gt;
    gt.class_id = parse_class_id(fields[0], line_no, num_classes);
    gt.box.cx = parse_unit_real(fields[1], line_no, "cx");
    gt.box.cy = parse_unit_real(fields[2], line_no, "cy");
    gt.box.w = parse_unit_real(fields[3], line_no, "w");
    gt.box.h = parse_unit_real(fields[4], line_no, "h");
    boxes.push_back(gt);
  }
  return boxes;
}

std::string write_labels(const std::vector<GroundTruthBox>& boxes) {
  std::string out;
  for (const GroundTruthBox& gt : boxes) {
    out += std::to_string(gt.class_id);
    out += ' ';
    append_box_fields(out, gt.box);
    out += '\n';
  }
  return out;
}

std::vector<Detection> parse_detections(std::string_view text,
                                        int num_classes) {
  std::vector<Detection> dets;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t line_no = i + 1;
    if (is_blank(line) || line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw ParseError(
          "line " + std::to_string(line_no) +
              ": expected 6 fields (class_id confidence cx cy w h), got " +
              std::to_string(fields.size()),
          line_no);
    }
    Detection det;
    det.class_id = parse_class_id(fields[0], line_no, num_classes);
    det.confidence = parse_unit_real(fields[1], line_no, "confidence");
    det.box.cx = parse_unit_real(fields[2], line_no, "cx");
    det.box.cy = parse_unit_real(fields[3], line_no, "cy");
    det.box.w = parse_unit_real(fields[4], line_no, "w");
    det.box.h = parse_unit_real(fields[5], line_no, "h");
    dets.push_back(det);
  }
  return dets;
}

std::string write_detections(const std::vector<Detection>& dets) {
  std::string out;
  char buf[32];
  for (const Detection& det : dets) {
    out += std::to_string(det.class_id);
    std::snprintf(buf, sizeof(buf), " %.6f ", det.confidence);
    out += buf;
    append_box_fields(out, det.box);
    out += '\n';
  }
  return out;
}

ImageBuffer read_ppm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw ParseError("ppm: unsupported format (expected P6 magic)", 0);
  }
  PpmScanner scanner(bytes, 2);
  const unsigned width = scanner.next_uint("width");
  const unsigned height = scanner.next_uint("height");
  const unsigned maxval = scanner.next_uint("maxval");
  if (width == 0 || height == 0) {
    throw ParseError("ppm: zero image dimension", 0);
  }
  if (width > 1u << 15 || height > 1u << 15) {
    throw ParseError("ppm: image dimension too large", 0);
  }
  if (maxval != 255) {
    throw ParseError("ppm: unsupported maxval " + std::to_string(maxval) +
                         " (only 255)",
                     0);
  }
  const std::size_t start = scanner.payload_start();
  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - start < need) {
    throw ParseError("ppm: truncated payload (need " + std::to_string(need) +
                         " bytes, have " + std::to_string(bytes.size() - start) +
                         ")",
                     start);
  }
  ImageBuffer img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.channels = 3;
  img.pixels.resize(need);
  for (std::size_t i = 0; i < need; ++i) {
    img.pixels[i] =
        static_cast<unsigned char>(bytes[start + i]) / 255.0;
  }
  return img;
}

std::string write_ppm(const ImageBuffer& img) {
  if (img.channels != 3) {
    throw std::invalid_argument("write_ppm: image must have 3 channels");
  }
  img.validate();
  std::string out = "P6\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.pixels.size());
  for (double v : img.pixels) {
    out += static_cast<char>(
        static_cast<unsigned char>(std::lround(v * 255.0)));
  }
  return out;
}

GridTensor read_tensor(std::string_view text) {
  const nlohmann::json doc = parse_json(text, "tensor");
  try {
    if (!doc.is_object()) throw ParseError("tensor: document is not an "
                                           "object", 0);
    GridTensor t;
    t.s = doc.at("s").get<int>();
    t.b = doc.at("b").get<int>();
    t.num_classes = doc.at("num_classes").get<int>();
    t.values = doc.at("values").get<std::vector<double>>();
    t.validate();
    for (double& v : t.values) v = std::clamp(v, 0.0, 1.0);
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("tensor: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("tensor: ") + e.what(), 0);
  }
}

std::string write_tensor(const GridTensor& t) {
  nlohmann::json doc;
  doc["s"] = t.s;
  doc["b"] = t.b;
  doc["num_classes"] = t.num_classes;
  doc["values"] = t.values;
  return doc.dump();
}

DatasetManifest parse_manifest(std::string_view text) {
  const nlohmann::json doc = parse_json(text, "manifest");
  try {
    if (!doc.is_object()) throw ParseError("manifest: document is not an "
                                           "object", 0);
    DatasetManifest m;
    m.class_names = doc.at("classes").get<std::vector<std::string>>();
    if (m.class_names.empty()) {
      throw ParseError("manifest: needs at least one class", 0);
    }
    for (const std::string& name : m.class_names) {
      if (name.empty()) throw ParseError("manifest: empty class name", 0);
    }
    for (const nlohmann::json& item : doc.at("items")) {
      ManifestItem mi;
      mi.image = item.at("image").get<std::string>();
      mi.labels = item.at("labels").get<std::string>();
      if (item.contains("detections")) {
        mi.detections = item.at("detections").get<std::string>();
        if (mi.detections.empty()) {
          throw ParseError("manifest: empty detections path", 0);
        }
      }
      if (mi.image.empty() || mi.labels.empty()) {
        throw ParseError("manifest: empty image or labels path", 0);
      }
      m.items.push_back(std::move(mi));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), 0);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw std::runtime_error("read failed for " + path.string());
  }
  return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot create " + tmp.string());
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out.good()) {
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sightline
