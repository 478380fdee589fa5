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
#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "sightline/postprocess.hpp"
#include "sightline/rng.hpp"
#include "test_util.hpp"

using namespace sightline;

namespace {

bool same_detection(const Detection& a, const Detection& b) {
  return a.class_id == b.class_id && a.confidence == b.confidence &&
         a.box.cx == b.box.cx && a.box.cy == b.box.cy && a.box.w == b.box.w &&
         a.box.h == b.box.h;
}

}  // namespace

TEST_CASE("confidence_score multiplies its inputs") {
  CHECK(confidence_score(1.0, 0.5) == 0.5);
  CHECK(confidence_score(0.0, 0.73) == 0.0);
  CHECK(confidence_score(0.8, 0.75) == doctest::Approx(0.6));
}

TEST_CASE("filter_by_score keeps strictly-above detections in order") {
  std::vector<Detection> dets(3);
  dets[0].confidence = 0.3;
  dets[1].confidence = 0.5;
  dets[2].confidence = 0.7;

  CHECK(filter_by_score(dets, 0.0).size() == 3);
  CHECK(filter_by_score(dets, 1.0).empty());

  const auto kept = filter_by_score(dets, 0.5);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].confidence == 0.7);
}

TEST_CASE("nms keeps a single detection as-is") {
  Detection d;
  d.box = BoundingBox{0.5, 0.5, 0.25, 0.25};
  d.confidence = 0.4;
  const auto kept = nms({d}, 0.5, true);
  REQUIRE(kept.size() == 1);
  CHECK(same_detection(kept[0], d));
}

TEST_CASE("nms drops the duplicate of two identical boxes") {
  Detection hi, lo;
  hi.box = lo.box = BoundingBox{0.5, 0.5, 0.25, 0.25};
  hi.confidence = 0.9;
  lo.confidence = 0.8;
  const auto kept = nms({lo, hi}, 0.5, true);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].confidence == 0.9);
}

TEST_CASE("nms empty input gives empty output") {
  CHECK(nms({}, 0.5, true).empty());
}

TEST_CASE("nms tie on confidence keeps the earlier detection") {
  Detection a, b;
  a.box = b.box = BoundingBox{0.5, 0.5, 0.25, 0.25};
  a.confidence = b.confidence = 0.7;
  a.class_id = b.class_id = 0;
  const auto kept = nms({a, b}, 0.5, true);
  REQUIRE(kept.size() == 1);
  // indistinguishable boxes; the audit below covers the index tie-break
  CHECK(oracle::verify_nms({a, b}, kept, 0.5, true) == "");
}

TEST_CASE("class-aware nms keeps overlapping boxes of different classes") {
  Detection a, b;
  a.box = b.box = BoundingBox{0.5, 0.5, 0.25, 0.25};
  a.confidence = 0.9;
  b.confidence = 0.8;
  a.class_id = 0;
  b.class_id = 1;
  CHECK(nms({a, b}, 0.5, true).size() == 2);
  CHECK(nms({a, b}, 0.5, false).size() == 1);
}

TEST_CASE("nms at threshold 1 keeps everything") {
  Rng rng(21);
  std::vector<Detection> dets;
  for (int i = 0; i < 12; ++i) {
    dets.push_back(testutil::random_detection(rng, 2));
  }
  CHECK(nms(dets, 1.0, false).size() == dets.size());
}

TEST_CASE("nms at threshold 0 keeps one box per mutually-overlapping "
          "cluster") {
  std::vector<Detection> dets;
  for (int cluster = 0; cluster < 3; ++cluster) {
    for (int i = 0; i < 4; ++i) {
      Detection d;
      d.box = BoundingBox{0.15 + 0.3 * cluster, 0.5, 0.125 + 0.03125 * i,
                          0.125};
      d.confidence = 0.5 + 0.1 * i;
      dets.push_back(d);
    }
  }
  CHECK(nms(dets, 0.0, false).size() == 3);
}

TEST_CASE("nms output confidences are non-increasing and result is "
          "idempotent") {
  Rng rng(22);
  for (int round = 0; round < 50; ++round) {
    std::vector<Detection> dets;
    const int n = rng.uniform_int(0, 12);
    for (int i = 0; i < n; ++i) {
      dets.push_back(testutil::random_detection(rng, 2, true));
    }
    const double thr = rng.uniform_int(1, 9) / 10.0;
    const auto kept = nms(dets, thr, true);
    for (std::size_t i = 1; i < kept.size(); ++i) {
      CHECK(kept[i].confidence <= kept[i - 1].confidence);
    }
    const auto again = nms(kept, thr, true);
    REQUIRE(again.size() == kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      CHECK(same_detection(again[i], kept[i]));
    }
  }
}

TEST_CASE("the kept set ignores input order when confidences are distinct") {
  Rng rng(24);
  for (int round = 0; round < 50; ++round) {
    std::vector<Detection> dets;
    const int n = rng.uniform_int(1, 10);
    for (int i = 0; i < n; ++i) {
      Detection d = testutil::random_detection(rng, 2);
      d.confidence = (i + 1) / 16.0;
      dets.push_back(d);
    }
    std::vector<Detection> shuffled = dets;
    std::reverse(shuffled.begin(), shuffled.end());
    const auto a = nms(dets, 0.4, true);
    const auto b = nms(shuffled, 0.4, true);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(same_detection(a[i], b[i]));  // both emit by descending score
    }
  }
}

TEST_CASE("nms matches the reference implementation and passes the "
          "first-principles audit") {
  Rng rng(23);
  for (int round = 0; round < 200; ++round) {
    std::vector<Detection> dets;
    const int n = rng.uniform_int(1, 10);
    const bool aware = rng.coin();
    for (int i = 0; i < n; ++i) {
      dets.push_back(testutil::random_detection(rng, 2, rng.coin()));
    }
    const double thr = rng.uniform_int(0, 10) / 10.0;

    const auto kept = nms(dets, thr, aware);
    CHECK(oracle::verify_nms(dets, kept, thr, aware) == "");

    const auto ref = oracle::reference_nms(dets, thr, aware);
    REQUIRE(kept.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      CHECK(same_detection(kept[i], dets[ref[i]]));
    }
  }
}
