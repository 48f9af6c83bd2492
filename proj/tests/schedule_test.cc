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

#include "uwdet/schedule.h"

#include <gtest/gtest.h>

#include "uwdet/error.h"

namespace uwdet {
namespace {

TEST(ScheduleTest, Examples) {
  const ScheduleConfig cfg;
  EXPECT_EQ(LrAt(cfg.warmup_iters, cfg), 0.005);
  EXPECT_DOUBLE_EQ(LrAt(0, cfg), 0.005 / 3.0);
  EXPECT_NEAR(LrAt(0, cfg), 0.001667, 1e-6);
  const std::int64_t ipe = cfg.iters_per_epoch;
  EXPECT_EQ(LrAt(7 * ipe - 1, cfg), 0.005);  // last iteration of epoch 7
  EXPECT_EQ(LrAt(7 * ipe, cfg), 0.0005);     // first of epoch 8
  EXPECT_EQ(LrAt(8 * ipe + 17, cfg), 0.0005);  // inside epoch 9
  EXPECT_EQ(LrAt(10 * ipe - 1, cfg), 0.0005);
  EXPECT_EQ(LrAt(10 * ipe, cfg), 0.0001);  // epoch 11
  EXPECT_EQ(LrAt(11 * ipe + 5, cfg), 0.0001);  // epoch 12
}

TEST(ScheduleTest, EpochsAreOneBased) {
  const ScheduleConfig cfg;
  EXPECT_EQ(EpochOf(0, cfg), 1);
  EXPECT_EQ(EpochOf(999, cfg), 1);
  EXPECT_EQ(EpochOf(1000, cfg), 2);
}

TEST(ScheduleTest, WarmupIsLinearAndMonotone) {
  const ScheduleConfig cfg;
  double prev = 0.0;
  for (std::int64_t it = 0; it <= cfg.warmup_iters; ++it) {
    const double lr = LrAt(it, cfg);
    ASSERT_GT(lr, prev);
    const double a = static_cast<double>(it) / cfg.warmup_iters;
    ASSERT_NEAR(lr, 0.005 * (1.0 / 3.0 * (1 - a) + a), 1e-15);
    prev = lr;
  }
  for (std::int64_t it = cfg.warmup_iters; it < 12 * cfg.iters_per_epoch; ++it) {
    const double lr = LrAt(it, cfg);
    ASSERT_LE(lr, prev);
    prev = lr;
  }
}

TEST(ScheduleTest, GammaDecayWithoutExplicitRates) {
  ScheduleConfig cfg;
  cfg.step_lrs.clear();
  cfg.warmup_iters = 0;
  EXPECT_EQ(StepLr(0, cfg), 0.005);
  EXPECT_NEAR(StepLr(7 * cfg.iters_per_epoch, cfg), 0.0005, 1e-18);
  EXPECT_NEAR(StepLr(10 * cfg.iters_per_epoch, cfg), 0.00005, 1e-18);
}

TEST(ScheduleTest, Validation) {
  ScheduleConfig cfg;
  cfg.step_epochs = {11, 8};
  EXPECT_THROW(Validate(cfg), Error);
  cfg = {};
  cfg.step_lrs = {0.001};
  EXPECT_THROW(Validate(cfg), Error);
  cfg = {};
  cfg.base_lr = 0.0;
  EXPECT_THROW(Validate(cfg), Error);
  cfg = {};
  cfg.iters_per_epoch = 0;
  EXPECT_THROW(Validate(cfg), Error);
  cfg = {};
  EXPECT_THROW(LrAt(-1, cfg), Error);
}

}  // namespace
}  // namespace uwdet
