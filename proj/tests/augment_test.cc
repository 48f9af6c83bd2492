// Copyright 2026 The uwdet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uwdet/augment.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support/fixtures.h"
#include "support/oracles.h"
#include "uwdet/error.h"
#include "uwdet/random.h"

namespace uwdet {
namespace {

Sample RandomSample(Rng& rng, std::size_t h, std::size_t w, std::size_t n) {
  std::vector<Box> boxes;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    Box b = testing::RandomBox(rng, static_cast<double>(std::min(h, w)), 1.0);
    b.x1 *= static_cast<double>(w) / std::min(h, w);
    b.x2 *= static_cast<double>(w) / std::min(h, w);
    b.y1 *= static_cast<double>(h) / std::min(h, w);
    b.y2 *= static_cast<double>(h) / std::min(h, w);
    boxes.push_back(b);
    labels.push_back(1 + static_cast<int>(rng.Index(4)));
  }
  return MakeSample(testing::PatternImage(h, w), boxes, labels);
}

void ExpectSameSample(const Sample& a, const Sample& b) {
  EXPECT_EQ(a.image, b.image);
  ASSERT_EQ(a.boxes.size(), b.boxes.size());
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    EXPECT_NEAR(a.boxes[i].x1, b.boxes[i].x1, 1e-12);
    EXPECT_NEAR(a.boxes[i].y1, b.boxes[i].y1, 1e-12);
    EXPECT_NEAR(a.boxes[i].x2, b.boxes[i].x2, 1e-12);
    EXPECT_NEAR(a.boxes[i].y2, b.boxes[i].y2, 1e-12);
  }
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.weights, b.weights);
}

TEST(SampleTest, Validation) {
  EXPECT_THROW(MakeSample(Tensor({3, 4, 4}), {{0, 0, 5, 1}}, {1}), Error);
  EXPECT_THROW(MakeSample(Tensor({3, 4, 4}), {{0, 0, 1, 1}}, {}), Error);
  EXPECT_NO_THROW(MakeSample(Tensor({3, 4, 4}), {{0, 0, 4, 4}}, {1}));
}

TEST(FlipTest, Examples) {
  Rng rng(71);
  const Sample s = RandomSample(rng, 30, 40, 6);
  ExpectSameSample(HFlip(HFlip(s)), s);
  ExpectSameSample(VFlip(VFlip(s)), s);

  const Sample centered = MakeSample(Tensor({1, 10, 10}), {{3, 2, 7, 8}}, {1});
  EXPECT_EQ(HFlip(centered).boxes[0], centered.boxes[0]);
  EXPECT_EQ(VFlip(centered).boxes[0], centered.boxes[0]);

  const Sample wide = MakeSample(Tensor({1, 20, 100}), {{0, 0, 10, 10}}, {1});
  EXPECT_EQ(HFlip(wide).boxes[0], (Box{90, 0, 100, 10}));
  EXPECT_EQ(VFlip(wide).boxes[0], (Box{0, 10, 10, 20}));
}

TEST(FlipTest, PixelMapping) {
  const Tensor img = testing::PatternImage(3, 5);
  const Sample s = MakeSample(img, {}, {});
  const Sample h = HFlip(s), v = VFlip(s);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 0; y < 3; ++y)
      for (std::size_t x = 0; x < 5; ++x) {
        EXPECT_EQ(h.image.at(c, y, x), img.at(c, y, 4 - x));
        EXPECT_EQ(v.image.at(c, y, x), img.at(c, 2 - y, x));
      }
}

TEST(Rotate90Test, CyclesAndComposes) {
  Rng rng(72);
  const Sample s = RandomSample(rng, 24, 36, 5);
  Sample r = s;
  for (int i = 0; i < 4; ++i) r = Rotate90(r, 1);
  ExpectSameSample(r, s);
  ExpectSameSample(Rotate90(Rotate90(s, 1), 1), Rotate90(s, 2));
  ExpectSameSample(Rotate90(Rotate90(s, 2), 1), Rotate90(s, 3));
  EXPECT_EQ(Rotate90(s, 1).width(), 24u);
  EXPECT_EQ(Rotate90(s, 1).height(), 36u);
  EXPECT_THROW(Rotate90(s, 0), Error);
  EXPECT_THROW(Rotate90(s, 4), Error);
}

TEST(Rotate90Test, BoxesFollowCorners) {
  const Sample s = MakeSample(Tensor({1, 50, 100}), {{0, 0, 10, 20}}, {1});
  for (int k = 1; k <= 3; ++k) {
    const Box got = Rotate90(s, k).boxes[0];
    const Box want = testing::OracleRotateBox(s.boxes[0], 100, 50, k);
    EXPECT_NEAR(got.x1, want.x1, 1e-12) << k;
    EXPECT_NEAR(got.y1, want.y1, 1e-12) << k;
    EXPECT_NEAR(got.x2, want.x2, 1e-12) << k;
    EXPECT_NEAR(got.y2, want.y2, 1e-12) << k;
  }
  EXPECT_EQ(Rotate90(s, 1).boxes[0], (Box{0, 90, 20, 100}));
}

TEST(Rotate90Test, PixelsFollowBoxes) {
  // A single bright pixel stays inside its one-pixel box.
  Tensor img({1, 6, 9});
  img.at(0, 1, 7) = 255;
  const Sample s = MakeSample(img, {{7, 1, 8, 2}}, {1});
  for (int k = 1; k <= 3; ++k) {
    const Sample r = Rotate90(s, k);
    const Box& b = r.boxes[0];
    EXPECT_EQ(r.image.at(0, static_cast<std::size_t>(b.y1), static_cast<std::size_t>(b.x1)),
              255.0);
  }
}

std::vector<Sample> Transforms(const Sample& s) {
  return {HFlip(s), VFlip(s), Rotate90(s, 1), Rotate90(s, 2), Rotate90(s, 3)};
}

TEST(GeometricTest, PairwiseIoUExactOnQuarterPixelGrid) {
  Rng rng(73);
  Sample s = RandomSample(rng, 40, 60, 8);
  for (Box& b : s.boxes) {
    b = {std::floor(b.x1 * 4) / 4, std::floor(b.y1 * 4) / 4, std::ceil(b.x2 * 4) / 4,
         std::ceil(b.y2 * 4) / 4};
  }
  for (const Sample& t : Transforms(s)) {
    for (std::size_t i = 0; i < s.boxes.size(); ++i)
      for (std::size_t j = 0; j < s.boxes.size(); ++j)
        EXPECT_EQ(IoU(t.boxes[i], t.boxes[j]), IoU(s.boxes[i], s.boxes[j]));
  }
}

TEST(GeometricTest, PairwiseIoUInvariantOnRealCoordinates) {
  Rng rng(77);
  const Sample s = RandomSample(rng, 40, 60, 8);
  for (const Sample& t : Transforms(s)) {
    for (std::size_t i = 0; i < s.boxes.size(); ++i)
      for (std::size_t j = 0; j < s.boxes.size(); ++j)
        EXPECT_NEAR(IoU(t.boxes[i], t.boxes[j]), IoU(s.boxes[i], s.boxes[j]), 1e-12);
  }
}

TEST(CutoutTest, Examples) {
  const Sample s = MakeSample(testing::PatternImage(8, 8), {{1, 1, 4, 4}}, {2});
  ExpectSameSample(Cutout(s, {}, 0.0), s);
  const std::vector<Box> full{{0, 0, 8, 8}};
  const Sample filled = Cutout(s, full, 7.0);
  for (double v : filled.image.data()) EXPECT_EQ(v, 7.0);

  const std::vector<Box> patch{{2, 3, 5, 5}};
  const double fill = 10.0;
  double covered = 0.0, before = 0.0, after = 0.0;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t y = 3; y < 5; ++y)
      for (std::size_t x = 2; x < 5; ++x) covered += s.image.at(c, y, x);
  const Sample cut = Cutout(s, patch, fill);
  for (double v : s.image.data()) before += v;
  for (double v : cut.image.data()) after += v;
  EXPECT_EQ(before - after, covered - fill * 6 * 3);
  EXPECT_EQ(cut.boxes, s.boxes);
}

TEST(MixupTest, Examples) {
  const Sample a = MakeSample(Tensor({1, 4, 4}, 0.0), {{0, 0, 1, 1}}, {1});
  const Sample b = MakeSample(Tensor({1, 4, 4}, 2.0), {{1, 1, 3, 3}, {0, 0, 4, 4}}, {2, 3});
  const Sample half = Mixup(a, b, 0.5);
  for (double v : half.image.data()) EXPECT_EQ(v, 1.0);
  EXPECT_EQ(half.boxes.size(), 3u);
  EXPECT_EQ(half.weights, (std::vector<double>{0.5, 0.5, 0.5}));

  const Sample first = Mixup(a, b, 1.0);
  EXPECT_EQ(first.image, a.image);
  EXPECT_EQ(first.boxes.size(), 3u);
  EXPECT_EQ(first.weights, (std::vector<double>{1.0, 0.0, 0.0}));
  EXPECT_EQ(first.labels, (std::vector<int>{1, 2, 3}));

  EXPECT_THROW(Mixup(a, b, 1.5), Error);
  EXPECT_THROW(Mixup(a, MakeSample(Tensor({1, 5, 4}), {}, {}), 0.5), Error);
}

TEST(ResizeTest, Examples) {
  Rng rng(74);
  const Sample s = RandomSample(rng, 20, 30, 6);
  const Sample same = Resize(s, 30, 20);
  EXPECT_EQ(same.boxes, s.boxes);
  const Sample twice = Resize(s, 60, 40);
  for (std::size_t i = 0; i < s.boxes.size(); ++i) {
    EXPECT_NEAR(twice.boxes[i].x1, 2 * s.boxes[i].x1, 1e-12);
    EXPECT_NEAR(twice.boxes[i].y2, 2 * s.boxes[i].y2, 1e-12);
  }
  const Sample odd = Resize(s, 45, 17);
  EXPECT_EQ(odd.width(), 45u);
  EXPECT_EQ(odd.height(), 17u);
  // Uniform scaling preserves IoU; anisotropic scaling does too for boxes.
  for (std::size_t i = 0; i < s.boxes.size(); ++i)
    for (std::size_t j = 0; j < s.boxes.size(); ++j)
      EXPECT_NEAR(IoU(odd.boxes[i], odd.boxes[j]), IoU(s.boxes[i], s.boxes[j]), 1e-9);
}

TEST(BBoxJitterTest, Examples) {
  Rng rng(75);
  std::vector<Box> boxes;
  for (int i = 0; i < 50; ++i) boxes.push_back(testing::RandomBox(rng, 100, 2));
  EXPECT_EQ(BBoxJitter(boxes, 0.0, 3), boxes);
  EXPECT_EQ(BBoxJitter(boxes, 0.1, 3), BBoxJitter(boxes, 0.1, 3));
  EXPECT_NE(BBoxJitter(boxes, 0.1, 3), BBoxJitter(boxes, 0.1, 4));
  for (const Box& b : BBoxJitter(boxes, 0.5, 5, std::pair{100.0, 100.0})) {
    EXPECT_TRUE(IsValid(b));
    EXPECT_GE(b.x1, 0.0);
    EXPECT_LE(b.y2, 100.0);
  }
  EXPECT_THROW(BBoxJitter(boxes, -0.1, 3), Error);
}

TEST(BBoxJitterTest, ModerateNoiseKeepsOverlap) {
  const std::vector<Box> unit(10000, Box{0, 0, 1, 1});
  const auto jittered = BBoxJitter(unit, 0.1, 11);
  double mean = 0.0;
  for (const Box& b : jittered) mean += IoU(b, unit[0]) / unit.size();
  EXPECT_GT(mean, 0.6);
}

TEST(BBoxJitterTest, SampleStaysInsideImage) {
  Rng rng(76);
  const Sample s = RandomSample(rng, 30, 30, 10);
  const Sample j = BBoxJitter(s, 0.3, 9);
  EXPECT_NO_THROW(Validate(j));
  EXPECT_EQ(j.image, s.image);
}

}  // namespace
}  // namespace uwdet
