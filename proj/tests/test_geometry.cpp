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

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "sightline/geometry.hpp"
#include "sightline/rng.hpp"
#include "test_util.hpp"

using namespace sightline;

TEST_CASE("iou of identical boxes is 1") {
  const BoundingBox b{0.5, 0.5, 0.4, 0.4};
  CHECK(iou(b, b) == doctest::Approx(1.0));
}

TEST_CASE("iou of disjoint boxes is 0") {
  const BoundingBox a{0.2, 0.2, 0.2, 0.2};
  const BoundingBox b{0.8, 0.8, 0.2, 0.2};
  CHECK(iou(a, b) == 0.0);
}

TEST_CASE("iou of unit-offset overlapping squares is 1/7") {
  // corners (0,0)-(2,2) and (1,1)-(3,3), scaled by 1/4 into the unit square
  const BoundingBox a = from_corners(0.0, 0.0, 0.5, 0.5);
  const BoundingBox b = from_corners(0.25, 0.25, 0.75, 0.75);
  CHECK(iou(a, b) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(oracle::rasterized_iou(a, b, 4) == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("iou of degenerate boxes is 0, never NaN") {
  const BoundingBox point{0.5, 0.5, 0.0, 0.0};
  CHECK(iou(point, point) == 0.0);
  CHECK_FALSE(std::isnan(iou(point, BoundingBox{0.5, 0.5, 0.2, 0.2})));
}

TEST_CASE("iou is symmetric and bounded on random boxes") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a = testutil::dyadic_box(rng);
    const BoundingBox b = testutil::dyadic_box(rng);
    const double ab = iou(a, b);
    CHECK(ab == iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    if (box_area(a) > 0.0) CHECK(iou(a, a) == doctest::Approx(1.0));
  }
}

TEST_CASE("iou agrees with the integer-grid rasterization oracle") {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a = testutil::dyadic_box(rng, 64);
    const BoundingBox b = testutil::dyadic_box(rng, 64);
    // fields on the 1/64 grid put corners on the 1/128 grid
    const double expected = oracle::rasterized_iou(a, b, 128);
    CHECK(iou(a, b) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("corner conversion round-trips and matches hand values") {
  const Corners full = to_corners(BoundingBox{0.5, 0.5, 1.0, 1.0});
  CHECK(full.x1 == 0.0);
  CHECK(full.y1 == 0.0);
  CHECK(full.x2 == 1.0);
  CHECK(full.y2 == 1.0);

  const Corners c = to_corners(BoundingBox{0.25, 0.75, 0.5, 0.5});
  CHECK(c.x1 == 0.0);
  CHECK(c.y1 == 0.5);
  CHECK(c.x2 == 0.5);
  CHECK(c.y2 == 1.0);

  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox b = testutil::dyadic_box(rng, 1024);
    const Corners cc = to_corners(b);
    const BoundingBox back = from_corners(cc.x1, cc.y1, cc.x2, cc.y2);
    CHECK(back.cx == b.cx);
    CHECK(back.cy == b.cy);
    CHECK(back.w == b.w);
    CHECK(back.h == b.h);
  }
}

TEST_CASE("from_corners rejects inverted corners") {
  CHECK_THROWS_AS(from_corners(0.5, 0.0, 0.4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(from_corners(0.0, 0.5, 1.0, 0.4), std::invalid_argument);
  CHECK_NOTHROW(from_corners(0.5, 0.5, 0.5, 0.5));  // zero size is fine
}

TEST_CASE("clip_to_unit") {
  const BoundingBox inside{0.5, 0.5, 0.25, 0.25};
  const BoundingBox kept = clip_to_unit(inside);
  CHECK(kept.cx == inside.cx);
  CHECK(kept.w == inside.w);

  const BoundingBox spill = from_corners(-0.5, -0.5, 0.5, 0.5);
  const Corners clipped = to_corners(clip_to_unit(spill));
  CHECK(clipped.x1 == 0.0);
  CHECK(clipped.y1 == 0.0);
  CHECK(clipped.x2 == 0.5);
  CHECK(clipped.y2 == 0.5);

  const BoundingBox outside{2.0, 2.0, 0.2, 0.2};
  CHECK(box_area(clip_to_unit(outside)) == 0.0);
}

TEST_CASE("decode_grid on an all-zero-confidence tensor is empty") {
  GridTensor t = GridTensor::zeros(2, 2, 3);
  CHECK(decode_grid(t, 0.1).empty());
}

TEST_CASE("decode_grid single-cell identity") {
  GridTensor t = GridTensor::zeros(1, 1, 1);
  t.at(0, 0, 0, 0) = 0.5;
  t.at(0, 0, 0, 1) = 0.5;
  t.at(0, 0, 0, 2) = 0.5;
  t.at(0, 0, 0, 3) = 0.5;
  t.at(0, 0, 0, 4) = 0.9;
  t.at(0, 0, 0, 5) = 1.0;
  const auto dets = decode_grid(t, 0.5);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].box.cx == doctest::Approx(0.5));
  CHECK(dets[0].box.cy == doctest::Approx(0.5));
  CHECK(dets[0].box.w == 0.5);
  CHECK(dets[0].box.h == 0.5);
  CHECK(dets[0].confidence == doctest::Approx(0.9));
  CHECK(dets[0].class_id == 0);
}

TEST_CASE("decode_grid maps cell-relative centers to absolute ones") {
  GridTensor t = GridTensor::zeros(2, 1, 1);
  t.at(1, 0, 0, 0) = 0.5;  // row 1, col 0
  t.at(1, 0, 0, 1) = 0.5;
  t.at(1, 0, 0, 4) = 1.0;
  t.at(1, 0, 0, 5) = 1.0;
  const auto dets = decode_grid(t, 0.5);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].box.cx == doctest::Approx(0.25));
  CHECK(dets[0].box.cy == doctest::Approx(0.75));
}

TEST_CASE("decode_grid picks the argmax class and multiplies scores") {
  GridTensor t = GridTensor::zeros(1, 1, 3);
  t.at(0, 0, 0, 4) = 0.8;
  t.at(0, 0, 0, 5) = 0.2;
  t.at(0, 0, 0, 6) = 0.9;
  t.at(0, 0, 0, 7) = 0.1;
  const auto dets = decode_grid(t, 0.5);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].class_id == 1);
  CHECK(dets[0].confidence == doctest::Approx(0.72));
}

TEST_CASE("decode_grid threshold is strict and emission is (row,col,box)") {
  GridTensor t = GridTensor::zeros(2, 2, 1);
  for (int row = 0; row < 2; ++row) {
    for (int col = 0; col < 2; ++col) {
      for (int k = 0; k < 2; ++k) {
        t.at(row, col, k, 4) = 0.5;
        t.at(row, col, k, 5) = 1.0;
      }
    }
  }
  CHECK(decode_grid(t, 0.5).empty());  // equal to threshold: not emitted

  const auto dets = decode_grid(t, 0.4);
  REQUIRE(dets.size() == 8);
  // (row,col,box) order means cy is non-decreasing
  for (std::size_t i = 1; i < dets.size(); ++i) {
    CHECK(dets[i].box.cy >= dets[i - 1].box.cy);
  }
}

TEST_CASE("decode_grid count shrinks as the threshold grows, centers stay "
          "in the unit square") {
  Rng rng(14);
  GridTensor t = GridTensor::zeros(3, 2, 2);
  for (double& v : t.values) v = rng.uniform();
  std::size_t prev = decode_grid(t, 0.0).size();
  for (double thr : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto dets = decode_grid(t, thr);
    CHECK(dets.size() <= prev);
    prev = dets.size();
    for (const Detection& d : dets) {
      CHECK(d.confidence > thr);
      CHECK(d.box.cx >= 0.0);
      CHECK(d.box.cx <= 1.0);
      CHECK(d.box.cy >= 0.0);
      CHECK(d.box.cy <= 1.0);
    }
  }
}

TEST_CASE("decode_grid rejects a length mismatch") {
  GridTensor t = GridTensor::zeros(2, 1, 1);
  t.values.pop_back();
  CHECK_THROWS_AS(decode_grid(t, 0.5), std::invalid_argument);
}
