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

#include "uwdet/suppression.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "support/oracles.h"
#include "uwdet/error.h"
#include "uwdet/random.h"

namespace uwdet {
namespace {

using testing::OracleNms;
using testing::OracleSoftNms;
using testing::RandomScene;

TEST(NmsTest, Examples) {
  EXPECT_TRUE(Nms(std::vector<Detection>{}, 0.5).empty());
  const Detection a{{0, 0, 10, 10}, 0.9, 1};
  EXPECT_EQ(Nms(std::vector<Detection>{a}, 0.5), std::vector<Detection>{a});
  const Detection b{{0, 0, 10, 10}, 0.8, 1};
  EXPECT_EQ(Nms(std::vector<Detection>{b, a}, 0.5), std::vector<Detection>{a});
}

TEST(NmsTest, ClassAwareUnlessAgnostic) {
  const std::vector<Detection> dets{{{0, 0, 10, 10}, 0.9, 1},
                                    {{0, 0, 10, 10}, 0.8, 2}};
  EXPECT_EQ(Nms(dets, 0.5).size(), 2u);
  EXPECT_EQ(Nms(dets, 0.5, true).size(), 1u);
}

TEST(NmsTest, SuppressesAtExactThreshold) {
  const std::vector<Detection> dets{{{0, 0, 3, 1}, 0.9, 1}, {{1, 0, 4, 1}, 0.8, 1}};
  EXPECT_EQ(Nms(dets, 0.5).size(), 1u);
  EXPECT_EQ(Nms(dets, 0.51).size(), 2u);
}

TEST(NmsTest, TiesKeepLowerIndexFirst) {
  const std::vector<Detection> dets{{{0, 0, 1, 1}, 0.5, 1},
                                    {{5, 5, 6, 6}, 0.5, 1},
                                    {{0, 0, 1, 1}, 0.5, 1}};
  const auto out = Nms(dets, 0.5);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], dets[0]);
  EXPECT_EQ(out[1], dets[1]);
}

TEST(NmsTest, RejectsBadThreshold) {
  const std::vector<Detection> dets{{{0, 0, 1, 1}, 0.5, 1}};
  EXPECT_THROW(Nms(dets, 0.0), Error);
  EXPECT_THROW(Nms(dets, 1.5), Error);
}

TEST(NmsTest, MatchesOracleOnRandomScenes) {
  Rng rng(21);
  for (int scene = 0; scene < 100; ++scene) {
    const auto dets = RandomScene(rng, 1 + rng.Index(200), 3, 300.0);
    const double thr = rng.Uniform(0.2, 0.9);
    const bool agnostic = scene % 3 == 0;
    const auto out = Nms(dets, thr, agnostic);
    ASSERT_EQ(out, OracleNms(dets, thr, agnostic)) << "scene " << scene;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
      ASSERT_GE(out[i].score, out[i + 1].score);
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        if (agnostic || out[i].class_id == out[j].class_id) {
          ASSERT_LT(IoU(out[i].box, out[j].box), thr);
        }
      }
    }
    ASSERT_EQ(Nms(out, thr, agnostic), out);
  }
}

TEST(SoftNmsTest, DisjointScoresUnchanged) {
  const std::vector<Detection> dets{{{0, 0, 1, 1}, 0.7, 1}, {{5, 5, 6, 6}, 0.9, 1}};
  const auto out = SoftNms(dets);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], dets[1]);
  EXPECT_EQ(out[1], dets[0]);
}

TEST(SoftNmsTest, LinearHalvesOverlappingNeighbour) {
  const std::vector<Detection> dets{{{0, 0, 3, 1}, 0.9, 1}, {{1, 0, 4, 1}, 0.8, 1}};
  SoftNmsOptions o;
  o.method = SoftNmsMethod::kLinear;
  o.iou_threshold = 0.3;
  const auto out = SoftNms(dets, o);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].score, 0.9);
  EXPECT_EQ(out[1].score, 0.4);
}

TEST(SoftNmsTest, TinySigmaActsAsHardSuppression) {
  const std::vector<Detection> dets{{{0, 0, 3, 1}, 0.9, 1},
                                    {{1, 0, 4, 1}, 0.8, 1},
                                    {{10, 0, 12, 1}, 0.5, 1}};
  SoftNmsOptions o;
  o.sigma = 1e-6;
  const auto out = SoftNms(dets, o);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], dets[0]);
  EXPECT_EQ(out[1], dets[2]);
}

TEST(SoftNmsTest, LinearWithUnitThresholdIsIdentity) {
  Rng rng(22);
  auto dets = RandomScene(rng, 60, 2, 100.0);
  SoftNmsOptions o;
  o.method = SoftNmsMethod::kLinear;
  o.iou_threshold = 1.0;
  o.score_floor = 0.0;
  const auto out = SoftNms(dets, o);
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection& a, const Detection& b) { return a.score > b.score; });
  EXPECT_EQ(out, dets);
}

TEST(SoftNmsTest, RejectsBadOptions) {
  const std::vector<Detection> dets{{{0, 0, 1, 1}, 0.5, 1}};
  SoftNmsOptions o;
  o.sigma = 0.0;
  EXPECT_THROW(SoftNms(dets, o), Error);
  o = {};
  o.iou_threshold = 0.0;
  EXPECT_THROW(SoftNms(dets, o), Error);
}

TEST(SoftNmsTest, MatchesOracleAndNeverRaisesScores) {
  Rng rng(23);
  for (int scene = 0; scene < 100; ++scene) {
    const auto dets = RandomScene(rng, 1 + rng.Index(200), 3, 300.0);
    SoftNmsOptions o;
    o.method = scene % 2 ? SoftNmsMethod::kLinear : SoftNmsMethod::kGaussian;
    o.iou_threshold = rng.Uniform(0.1, 0.9);
    o.sigma = rng.Uniform(0.1, 1.0);
    o.score_floor = rng.Uniform(0.0, 0.2);
    o.class_agnostic = scene % 5 == 0;
    const auto out = SoftNms(dets, o);
    ASSERT_EQ(out, OracleSoftNms(dets, o)) << "scene " << scene;
    for (const Detection& d : out) {
      const bool has_origin = std::any_of(dets.begin(), dets.end(), [&](const Detection& s) {
        return s.box == d.box && s.class_id == d.class_id && s.score >= d.score;
      });
      ASSERT_TRUE(has_origin);
      ASSERT_GE(d.score, o.score_floor);
    }
  }
}

TEST(FilterByScoreTest, Examples) {
  const std::vector<Detection> dets{{{0, 0, 1, 1}, 0.00005, 1},
                                    {{0, 0, 1, 1}, 1.0, 1},
                                    {{0, 0, 1, 1}, 0.3, 2},
                                    {{0, 0, 1, 1}, 0.0001, 1}};
  EXPECT_EQ(FilterByScore(dets, 0.0), dets);
  const auto kept = FilterByScore(dets, kDefaultScoreThreshold);
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept[0], dets[1]);
  EXPECT_EQ(kept[2], dets[3]);
  const auto top = FilterByScore(dets, 1.0);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].score, 1.0);
  EXPECT_THROW(FilterByScore(dets, 1.5), Error);
}

}  // namespace
}  // namespace uwdet
