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

#ifndef UWDET_SUPPRESSION_H_
#define UWDET_SUPPRESSION_H_

#include <span>
#include <vector>

#include "uwdet/geometry.h"

namespace uwdet {

struct Detection {
  Box box;
  double score = 0.0;
  int class_id = 0;

  bool operator==(const Detection&) const = default;
};

// Suppression thresholds for the proposal stage and the final detection
// stage, and the confidence floor applied to final detections.
inline constexpr double kProposalNmsThreshold = 0.7;
inline constexpr double kDetectionNmsThreshold = 0.5;
inline constexpr double kDefaultScoreThreshold = 1e-4;

// Greedy non-maximum suppression. A detection is dropped when its IoU with
// an already kept detection of the same class (any class when
// class_agnostic) is >= iou_threshold. Output is sorted by descending score;
// equal scores keep their input order.
std::vector<Detection> Nms(std::span<const Detection> dets,
                           double iou_threshold, bool class_agnostic = false);

enum class SoftNmsMethod { kLinear, kGaussian };

struct SoftNmsOptions {
  double iou_threshold = kDetectionNmsThreshold;
  double sigma = 0.5;
  double score_floor = kDefaultScoreThreshold;
  SoftNmsMethod method = SoftNmsMethod::kGaussian;
  bool class_agnostic = false;
};

// Soft-NMS: repeatedly selects the highest remaining score and decays its
// neighbours instead of removing them.
//   linear:   s <- s * (1 - iou)        only when iou > iou_threshold
//   gaussian: s <- s * exp(-iou^2 / sigma)
// Detections whose score falls below score_floor are dropped. Output is in
// selection order, which is non-increasing in the decayed score.
std::vector<Detection> SoftNms(std::span<const Detection> dets,
                               const SoftNmsOptions& options = {});

// Keeps detections with score >= threshold, preserving order.
std::vector<Detection> FilterByScore(std::span<const Detection> dets,
                                     double threshold);

}  // namespace uwdet

#endif  // UWDET_SUPPRESSION_H_
