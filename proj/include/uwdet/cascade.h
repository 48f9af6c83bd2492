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

#ifndef UWDET_CASCADE_H_
#define UWDET_CASCADE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "uwdet/geometry.h"
#include "uwdet/suppression.h"

namespace uwdet {

enum class ScoreFusion { kAverage, kLast };

struct CascadeConfig {
  // Per-stage IoU thresholds, strictly increasing inside (0, 1).
  std::vector<double> thresholds = {0.5, 0.6, 0.7};
  ScoreFusion score_fusion = ScoreFusion::kAverage;
};

void Validate(const CascadeConfig& cfg);

struct GroundTruth {
  Box box;
  int class_id = 0;
};

// label is the matched class, or 0 for background; matched_gt is -1 for
// background.
struct Assignment {
  int label = 0;
  int matched_gt = -1;
  double max_iou = 0.0;
};

// Matches each proposal to its highest-IoU ground truth (lowest index on
// ties). Foreground iff that IoU >= iou_threshold.
std::vector<Assignment> AssignLabels(std::span<const Box> proposals,
                                     std::span<const GroundTruth> gts,
                                     double iou_threshold);

// Elementwise Decode.
std::vector<Box> Refine(std::span<const Box> proposals,
                        std::span<const Delta> deltas);

// A stage head maps the current boxes to per-box class probabilities
// (index 0 = background) and to regression deltas.
using StageClassifier =
    std::function<std::vector<std::vector<double>>(std::span<const Box>)>;
using StageRegressor = std::function<std::vector<Delta>(std::span<const Box>)>;

struct StageHead {
  StageClassifier classifier;
  StageRegressor regressor;
};

struct StageOutput {
  std::vector<Box> boxes;  // refined by this stage
  std::vector<std::vector<double>> class_scores;
  std::vector<int> labels;  // argmax of class_scores
};

struct CascadeResult {
  std::vector<StageOutput> stages;
  // One per proposal: final-stage box, best foreground class of the fused
  // scores. Suppression is left to the caller.
  std::vector<Detection> detections;
};

CascadeResult RunCascade(std::span<const Box> proposals,
                         std::span<const StageHead> heads,
                         const CascadeConfig& cfg);

std::vector<Detection> CascadeInference(std::span<const Box> proposals,
                                        std::span<const StageHead> heads,
                                        const CascadeConfig& cfg);

// Highest IoU of each proposal against any ground truth box.
std::vector<double> MaxIoU(std::span<const Box> proposals,
                           std::span<const Box> gts);

// Equal-width histogram over [0, 1]; value 1.0 lands in the last bin.
struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<std::size_t> counts;

  std::size_t total() const;
};

Histogram MakeHistogram(std::span<const double> values, std::size_t bins);

Histogram QualityDistribution(std::span<const Box> proposals,
                              std::span<const Box> gts,
                              std::size_t bins = 10);

double FractionAtLeast(std::span<const double> values, double threshold);

// Synthetic cascade: ground-truth boxes, proposals made by gaussian jitter of
// their centres (relative to size) and log-sizes, and one linear regressor
// per stage. A stage regressor observes the true delta to its matched ground
// truth plus gaussian noise and is fit by least squares on training
// proposals that are foreground under that stage's threshold, after they
// have passed through the earlier stages.
struct CascadeSimulationOptions {
  std::size_t num_gts = 40;
  std::size_t train_proposals_per_gt = 50;
  std::size_t test_proposals_per_gt = 10;
  double image_size = 800.0;
  double min_gt_size = 32.0;
  double max_gt_size = 256.0;
  double center_jitter = 0.15;
  double size_jitter = 0.15;
  double feature_noise = 0.05;
  std::size_t histogram_bins = 10;
};

// y = slope * x + intercept per delta component.
struct LinearDeltaRegressor {
  std::array<double, 4> slope = {1.0, 1.0, 1.0, 1.0};
  std::array<double, 4> intercept = {0.0, 0.0, 0.0, 0.0};

  Delta Apply(const Delta& feature) const;
};

// Ordinary least squares per component. Fewer than two samples, or a
// feature with zero variance, falls back to the identity map.
LinearDeltaRegressor FitLinearRegressor(std::span<const Delta> features,
                                        std::span<const Delta> targets);

struct CascadeSimulation {
  // Index 0 holds the proposals, index t the output of stage t.
  std::vector<std::vector<double>> ious;
  std::vector<Histogram> histograms;
  std::vector<double> fraction_high_quality;  // IoU >= last threshold
  std::vector<LinearDeltaRegressor> regressors;
};

CascadeSimulation SimulateCascade(const CascadeSimulationOptions& options,
                                  const CascadeConfig& cfg,
                                  std::uint64_t seed);

}  // namespace uwdet

#endif  // UWDET_CASCADE_H_
