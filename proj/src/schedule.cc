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

#include <cmath>

#include "uwdet/error.h"

namespace uwdet {

void Validate(const ScheduleConfig& cfg) {
  if (!(cfg.base_lr > 0.0)) ThrowInvalid("schedule: base_lr must be positive");
  if (cfg.warmup_iters < 0) ThrowInvalid("schedule: warmup_iters must be >= 0");
  if (!(cfg.warmup_start_factor > 0.0 && cfg.warmup_start_factor <= 1.0)) {
    ThrowInvalid("schedule: warmup_start_factor must lie in (0, 1]");
  }
  if (cfg.iters_per_epoch < 1) {
    ThrowInvalid("schedule: iters_per_epoch must be >= 1");
  }
  for (std::size_t i = 0; i < cfg.step_epochs.size(); ++i) {
    if (cfg.step_epochs[i] < 1 ||
        (i > 0 && cfg.step_epochs[i] <= cfg.step_epochs[i - 1])) {
      ThrowInvalid("schedule: step_epochs must be strictly increasing and >= 1");
    }
  }
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    ThrowInvalid("schedule: gamma must lie in (0, 1)");
  }
  if (!cfg.step_lrs.empty()) {
    if (cfg.step_lrs.size() != cfg.step_epochs.size()) {
      ThrowInvalid("schedule: step_lrs needs one value per step epoch");
    }
    double prev = cfg.base_lr;
    for (double lr : cfg.step_lrs) {
      if (!(lr > 0.0 && lr < prev)) {
        ThrowInvalid("schedule: step_lrs must be positive and decreasing");
      }
      prev = lr;
    }
  }
}

int EpochOf(std::int64_t iter, const ScheduleConfig& cfg) {
  return static_cast<int>(iter / cfg.iters_per_epoch) + 1;
}

double StepLr(std::int64_t iter, const ScheduleConfig& cfg) {
  Validate(cfg);
  if (iter < 0) ThrowInvalid("schedule: iteration must be >= 0");
  const int epoch = EpochOf(iter, cfg);
  std::size_t passed = 0;
  while (passed < cfg.step_epochs.size() && epoch >= cfg.step_epochs[passed]) {
    ++passed;
  }
  if (passed == 0) return cfg.base_lr;
  if (!cfg.step_lrs.empty()) return cfg.step_lrs[passed - 1];
  return cfg.base_lr * std::pow(cfg.gamma, static_cast<double>(passed));
}

double LrAt(std::int64_t iter, const ScheduleConfig& cfg) {
  const double lr = StepLr(iter, cfg);
  if (iter >= cfg.warmup_iters) return lr;
  const double progress =
      static_cast<double>(iter) / static_cast<double>(cfg.warmup_iters);
  const double f = cfg.warmup_start_factor;
  return lr * (f + (1.0 - f) * progress);
}

}  // namespace uwdet
