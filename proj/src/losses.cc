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

#include "uwdet/losses.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "uwdet/error.h"

namespace uwdet {

double SmoothL1(double x) {
  const double ax = std::abs(x);
  return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

double SmoothL1Derivative(double x) {
  if (std::abs(x) < 1.0) return x;
  return x > 0.0 ? 1.0 : -1.0;
}

double LocLoss(const Delta& a, const Delta& b) {
  return SmoothL1(a.dx - b.dx) + SmoothL1(a.dy - b.dy) +
         SmoothL1(a.dw - b.dw) + SmoothL1(a.dh - b.dh);
}

double ClsLoss(std::span<const double> scores, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= scores.size()) {
    ThrowInvalid("cls_loss: label " + std::to_string(label) +
                 " outside score vector of size " +
                 std::to_string(scores.size()));
  }
  return -std::log(std::max(scores[label], kMinLogProbability));
}

void Validate(const StageLossInput& in) {
  double sum = 0.0;
  for (double s : in.class_scores) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      ThrowInvalid("stage_loss: class scores must be finite and non-negative");
    }
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    ThrowInvalid("stage_loss: class scores sum to " + std::to_string(sum));
  }
  if (in.label < 0 ||
      static_cast<std::size_t>(in.label) >= in.class_scores.size()) {
    ThrowInvalid("stage_loss: label out of range");
  }
}

double StageLoss(const StageLossInput& in) {
  Validate(in);
  double loss = ClsLoss(in.class_scores, in.label);
  if (in.label >= 1) {
    loss += in.lambda * LocLoss(in.pred_delta, in.target_delta);
  }
  return loss;
}

double GIoULoss(const Box& a, const Box& b) { return 1.0 - GIoU(a, b); }
double DIoULoss(const Box& a, const Box& b) { return 1.0 - DIoU(a, b); }
double CIoULoss(const Box& a, const Box& b) { return 1.0 - CIoU(a, b); }

}  // namespace uwdet
