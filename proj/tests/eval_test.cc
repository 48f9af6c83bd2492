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

#include "uwdet/eval.h"

#include <gtest/gtest.h>

#include <vector>

#include "support/fixtures.h"
#include "support/oracles.h"
#include "uwdet/error.h"
#include "uwdet/random.h"

namespace uwdet {
namespace {

using MO = MatchOutcome;

TEST(MatchTest, Examples) {
  const std::vector<Box> gts{{0, 0, 10, 10}, {20, 20, 30, 30}};
  const std::vector<Detection> exact{{gts[0], 1.0, 1}, {gts[1], 1.0, 1}};
  EXPECT_EQ(Match(exact, gts, 0.5), (std::vector<MO>{MO::kTruePositive, MO::kTruePositive}));
  EXPECT_EQ(Match(exact, std::vector<Box>{}, 0.5),
            (std::vector<MO>{MO::kFalsePositive, MO::kFalsePositive}));
  const std::vector<Detection> dup{{{0, 0, 10, 9}, 0.6, 1}, {{0, 0, 10, 10}, 0.9, 1}};
  EXPECT_EQ(Match(dup, std::vector<Box>{gts[0]}, 0.5),
            (std::vector<MO>{MO::kFalsePositive, MO::kTruePositive}));
}

TEST(MatchTest, CrowdRegionsIgnoreDetections) {
  const std::vector<GtBox> gts{{{0, 0, 100, 100}, true}};
  const std::vector<Detection> dets{{{10, 10, 20, 20}, 0.9, 1}, {{200, 0, 210, 5}, 0.8, 1}};
  EXPECT_EQ(Match(dets, gts, 0.5), (std::vector<MO>{MO::kIgnored, MO::kFalsePositive}));
}

TEST(AveragePrecisionTest, Examples) {
  const std::vector<MO> all{MO::kTruePositive, MO::kTruePositive};
  EXPECT_EQ(AveragePrecision(all, 2), 1.0);
  EXPECT_EQ(AveragePrecision(std::vector<MO>{}, 3), 0.0);
  const std::vector<MO> mixed{MO::kTruePositive, MO::kFalsePositive, MO::kTruePositive};
  EXPECT_NEAR(*AveragePrecision(mixed, 2), 253.0 / 303.0, 1e-15);
  EXPECT_FALSE(AveragePrecision(std::vector<MO>{}, 0).has_value());
  EXPECT_EQ(AveragePrecision(std::vector<MO>{MO::kFalsePositive}, 0), 0.0);
  const std::vector<MO> ignored{MO::kIgnored, MO::kTruePositive};
  EXPECT_EQ(AveragePrecision(ignored, 1), 1.0);
}

TEST(IouThresholdsTest, StandardRange) {
  const auto t = IouThresholds(0.5, 0.95, 0.05);
  ASSERT_EQ(t.size(), 10u);
  EXPECT_EQ(t.front(), 0.5);
  EXPECT_NEAR(t.back(), 0.95, 1e-12);
  EXPECT_THROW(IouThresholds(0.0, 0.5, 0.1), Error);
  EXPECT_THROW(IouThresholds(0.6, 0.5, 0.1), Error);
}

TEST(EvaluateMapTest, PerfectDetections) {
  const Dataset ds = LoadCoco(testing::DataPath("perfect_ann.json"));
  const auto results = LoadResults(testing::DataPath("perfect_dets.json"));
  const EvalResult r = EvaluateMap(results, ds);
  EXPECT_EQ(r.map, 1.0);
  ASSERT_EQ(r.classes.size(), 4u);
  for (const ClassResult& c : r.classes) EXPECT_EQ(c.ap, 1.0);
  EXPECT_NE(FormatTable(r).find("mAP@[0.50:0.95] = 1.0000"), std::string::npos);
}

TEST(EvaluateMapTest, IoU072Fixture) {
  const Dataset ds = LoadCoco(testing::DataPath("iou072_ann.json"));
  const auto results = LoadResults(testing::DataPath("iou072_dets.json"));
  EXPECT_EQ(IoU(results[0].detection.box, ds.annotations[0].box), 0.72);
  const EvalResult r = EvaluateMap(results, ds);
  EXPECT_EQ(r.map, 0.5);
  for (std::size_t t = 0; t < r.iou_thresholds.size(); ++t) {
    EXPECT_EQ(r.map_per_threshold[t], r.iou_thresholds[t] <= 0.72 ? 1.0 : 0.0);
  }
}

TEST(EvaluateMapTest, MatchesBruteForceEvaluator) {
  Rng rng(81);
  for (int trial = 0; trial < 20; ++trial) {
    const testing::EvalFixture f = testing::RandomEvalFixture(rng);
    const EvalResult r = EvaluateMap(f.results, f.dataset);
    const testing::OracleEval o = testing::OracleEvaluate(f.results, f.dataset, r.iou_thresholds);
    ASSERT_NEAR(r.map, o.map, 1e-12) << "trial " << trial;
    std::vector<double> got;
    for (const ClassResult& c : r.classes)
      if (c.ap) got.push_back(*c.ap);
    ASSERT_EQ(got.size(), o.class_ap.size());
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got[i], o.class_ap[i], 1e-12);
  }
}

TEST(EvaluateMapTest, ClassWithoutDataIsSkipped) {
  Dataset ds = LoadCoco(testing::DataPath("iou072_ann.json"));
  ds.categories.push_back({5, "unused"});
  const auto results = LoadResults(testing::DataPath("iou072_dets.json"));
  const EvalResult r = EvaluateMap(results, ds);
  EXPECT_EQ(r.map, 0.5);
  EXPECT_FALSE(r.classes.back().ap.has_value());
}

TEST(EvaluateMapTest, MaxDetectionsCapsPerImage) {
  const Dataset ds = LoadCoco(testing::DataPath("iou072_ann.json"));
  std::vector<ResultRecord> results{{7, {{200, 200, 210, 210}, 0.99, 2}},
                                    {7, {{50, 40, 150, 140}, 0.5, 2}}};
  EvalOptions opts;
  EXPECT_LT(EvaluateMap(results, ds, opts).map, 1.0);
  opts.max_detections = 1;
  EXPECT_EQ(EvaluateMap(results, ds, opts).map, 0.0);
  opts.max_detections.reset();
  results[0].detection.score = 0.1;
  EXPECT_EQ(EvaluateMap(results, ds, opts).map, 1.0);
}

TEST(EvaluateMapTest, Errors) {
  EXPECT_THROW(EvaluateMap({}, Dataset{}), Error);
  Dataset ds = LoadCoco(testing::DataPath("iou072_ann.json"));
  ds.annotations.clear();
  EXPECT_THROW(EvaluateMap({}, ds), Error);
}

TEST(EvaluateMapTest, JsonReportIsCanonical) {
  const Dataset ds = LoadCoco(testing::DataPath("perfect_ann.json"));
  const auto results = LoadResults(testing::DataPath("perfect_dets.json"));
  const auto j = ToJson(EvaluateMap(results, ds));
  EXPECT_EQ(j.at("map").get<double>(), 1.0);
  EXPECT_EQ(j.at("classes").size(), 4u);
}

}  // namespace
}  // namespace uwdet
