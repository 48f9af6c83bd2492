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

#ifndef UWDET_SCHEDULE_H_
#define UWDET_SCHEDULE_H_

#include <cstdint>
#include <vector>

namespace uwdet {

// Step learning-rate schedule with linear warmup. Epochs are 1-indexed and
// a step takes effect at the first iteration of its epoch.
//
// The default reproduces base 0.005 (0.00125 per GPU on four GPUs), dropping
// to 0.0005 at epoch 8 and to 0.0001 at epoch 11, after a 500-iteration
// warmup from base / 3. Those two values are not a constant-gamma sequence,
// so they are listed explicitly in step_lrs. Leave step_lrs empty to use
// base_lr * gamma^k instead.
struct ScheduleConfig {
  double base_lr = 0.005;
  std::int64_t warmup_iters = 500;
  double warmup_start_factor = 1.0 / 3.0;
  std::vector<int> step_epochs = {8, 11};
  double gamma = 0.1;
  std::vector<double> step_lrs = {0.0005, 0.0001};
  std::int64_t iters_per_epoch = 1000;
};

void Validate(const ScheduleConfig& cfg);

// 1-indexed epoch containing iteration iter.
int EpochOf(std::int64_t iter, const ScheduleConfig& cfg);

// Learning rate without warmup.
double StepLr(std::int64_t iter, const ScheduleConfig& cfg);

// During warmup: StepLr * (f + (1 - f) * iter / warmup_iters), f the
// start factor. Afterwards StepLr.
double LrAt(std::int64_t iter, const ScheduleConfig& cfg);

}  // namespace uwdet

#endif  // UWDET_SCHEDULE_H_
