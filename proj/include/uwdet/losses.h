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

#ifndef UWDET_LOSSES_H_
#define UWDET_LOSSES_H_

#include <span>
#include <vector>

#include "uwdet/geometry.h"

namespace uwdet {

// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
double SmoothL1(double x);
double SmoothL1Derivative(double x);

// Sum of SmoothL1 over the four delta components.
double LocLoss(const Delta& a, const Delta& b);

// Probabilities below this are clamped before taking the log.
inline constexpr double kMinLogProbability = 1e-12;

// Cross-entropy -log(scores[label]) on a probability vector.
double ClsLoss(std::span<const double> scores, int label);

// Inputs to one cascade stage's loss. Label 0 is background, so the
// regression term is gated by label >= 1.
struct StageLossInput {
  std::vector<double> class_scores;
  int label = 0;
  Delta pred_delta;
  Delta target_delta;
  double lambda = 1.0;
};

// Throws kInvalidArgument unless class_scores is a probability vector
// (non-negative, sums to 1 within 1e-6) and label indexes it.
void Validate(const StageLossInput& in);

// ClsLoss + lambda * [label >= 1] * LocLoss.
double StageLoss(const StageLossInput& in);

// 1 - metric.
double GIoULoss(const Box& a, const Box& b);
double DIoULoss(const Box& a, const Box& b);
double CIoULoss(const Box& a, const Box& b);

}  // namespace uwdet

#endif  // UWDET_LOSSES_H_
