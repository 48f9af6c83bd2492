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

#ifndef UWDET_EVAL_H_
#define UWDET_EVAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uwdet/coco.h"
#include "uwdet/geometry.h"
#include "uwdet/suppression.h"

namespace uwdet {

enum class MatchOutcome { kTruePositive, kFalsePositive, kIgnored };

struct GtBox {
  Box box;
  bool iscrowd = false;
};

// Greedy matching in descending score order (ties by input index). Each
// detection takes the unmatched non-crowd ground truth of highest IoU with
// IoU >= iou_threshold and becomes a true positive. Failing that, a
// detection covered by a crowd region (intersection over detection area >=
// iou_threshold) is ignored; otherwise it is a false positive. Outcomes are
// returned in input order.
std::vector<MatchOutcome> Match(std::span<const Detection> dets,
                                std::span<const GtBox> gts,
                                double iou_threshold);
std::vector<MatchOutcome> Match(std::span<const Detection> dets,
                                std::span<const Box> gts,
                                double iou_threshold);

// 101-point interpolated AP of outcomes ranked by descending score. Ignored
// entries are skipped. The precision envelope (running max from the right)
// is read at recalls 0, 0.01, ..., 1 and averaged; recalls never reached
// contribute 0. Returns nullopt when num_gt == 0 and nothing was detected,
// and 0 when num_gt == 0 but there are detections.
std::optional<double> AveragePrecision(std::span<const MatchOutcome> ranked,
                                       std::size_t num_gt);

// min, min + step, ..., max (inclusive). Throws unless
// 0 < min <= max <= 1 and step > 0.
std::vector<double> IouThresholds(double min, double max, double step);

struct EvalOptions {
  std::vector<double> iou_thresholds = IouThresholds(0.5, 0.95, 0.05);
  // Detections kept per image and category, by rank. nullopt = no cap.
  std::optional<std::size_t> max_detections;
};

struct ClassResult {
  int category_id = 0;
  std::string name;
  std::size_t num_gt = 0;
  std::size_t num_detections = 0;
  // nullopt where the class has neither ground truth nor detections.
  std::vector<std::optional<double>> ap_per_threshold;
  std::optional<double> ap;  // mean over defined thresholds
};

struct EvalResult {
  std::vector<double> iou_thresholds;
  std::vector<ClassResult> classes;  // dataset category order
  // Mean over evaluated classes at each threshold.
  std::vector<double> map_per_threshold;
  double map = 0.0;  // mean of the evaluated classes' ap
};

// mAP over the dataset's categories. Detections of unknown categories are
// ignored. The result does not depend on the order of results: detections
// are ranked by score, then image id, category and box. Throws
// kInvalidArgument for an empty dataset or one with nothing to evaluate,
// and kIntegrity for results on unknown images.
EvalResult EvaluateMap(std::span<const ResultRecord> results,
                       const Dataset& dataset, const EvalOptions& options = {});

nlohmann::json ToJson(const EvalResult& result);
std::string FormatTable(const EvalResult& result);

}  // namespace uwdet

#endif  // UWDET_EVAL_H_
