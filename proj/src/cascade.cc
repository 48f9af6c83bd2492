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

#include "uwdet/cascade.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "uwdet/error.h"
#include "uwdet/random.h"

namespace uwdet {

void Validate(const CascadeConfig& cfg) {
  if (cfg.thresholds.empty()) ThrowInvalid("cascade: no stage thresholds");
  for (std::size_t i = 0; i < cfg.thresholds.size(); ++i) {
    const double u = cfg.thresholds[i];
    if (!(u > 0.0 && u < 1.0)) {
      ThrowInvalid("cascade: thresholds must lie in (0, 1)");
    }
    if (i > 0 && !(u > cfg.thresholds[i - 1])) {
      ThrowInvalid("cascade: thresholds must be strictly increasing");
    }
  }
}

std::vector<Assignment> AssignLabels(std::span<const Box> proposals,
                                     std::span<const GroundTruth> gts,
                                     double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    ThrowInvalid("assign_labels: threshold must lie in (0, 1)");
  }
  std::vector<Assignment> out(proposals.size());
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    Assignment& a = out[i];
    int best = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = IoU(proposals[i], gts[g].box);
      if (best < 0 || iou > a.max_iou) {
        a.max_iou = iou;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && a.max_iou >= iou_threshold) {
      a.label = gts[best].class_id;
      a.matched_gt = best;
    }
  }
  return out;
}

std::vector<Box> Refine(std::span<const Box> proposals,
                        std::span<const Delta> deltas) {
  if (proposals.size() != deltas.size()) {
    ThrowInvalid("refine: " + std::to_string(proposals.size()) +
                 " boxes but " + std::to_string(deltas.size()) + " deltas");
  }
  std::vector<Box> out(proposals.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(proposals[i].width() > 0.0 && proposals[i].height() > 0.0)) {
      ThrowInvalid("refine: proposal " + std::to_string(i) +
                   " has non-positive size");
    }
    out[i] = Decode(proposals[i], deltas[i]);
  }
  return out;
}

CascadeResult RunCascade(std::span<const Box> proposals,
                         std::span<const StageHead> heads,
                         const CascadeConfig& cfg) {
  Validate(cfg);
  if (heads.size() != cfg.thresholds.size()) {
    ThrowInvalid("cascade: " + std::to_string(heads.size()) +
                 " stage heads for " + std::to_string(cfg.thresholds.size()) +
                 " thresholds");
  }
  CascadeResult result;
  std::vector<Box> current(proposals.begin(), proposals.end());
  for (const StageHead& head : heads) {
    if (!head.classifier || !head.regressor) {
      ThrowInvalid("cascade: stage head is missing a callable");
    }
    StageOutput stage;
    stage.class_scores = head.classifier(current);
    if (stage.class_scores.size() != current.size()) {
      ThrowInvalid("cascade: classifier returned wrong number of rows");
    }
    stage.labels.reserve(current.size());
    for (const auto& scores : stage.class_scores) {
      if (scores.empty()) ThrowInvalid("cascade: empty score vector");
      stage.labels.push_back(static_cast<int>(
          std::max_element(scores.begin(), scores.end()) - scores.begin()));
    }
    stage.boxes = Refine(current, head.regressor(current));
    current = stage.boxes;
    result.stages.push_back(std::move(stage));
  }

  const std::size_t num_stages = result.stages.size();
  result.detections.reserve(current.size());
  for (std::size_t i = 0; i < current.size(); ++i) {
    std::vector<double> fused = result.stages.back().class_scores[i];
    if (cfg.score_fusion == ScoreFusion::kAverage) {
      for (std::size_t t = 0; t + 1 < num_stages; ++t) {
        const auto& s = result.stages[t].class_scores[i];
        if (s.size() != fused.size()) {
          ThrowInvalid("cascade: stages disagree on class count");
        }
        for (std::size_t k = 0; k < fused.size(); ++k) fused[k] += s[k];
      }
      for (double& v : fused) v /= static_cast<double>(num_stages);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < fused.size(); ++k) {
      if (best == 0 || fused[k] > fused[best]) best = k;
    }
    result.detections.push_back(
        {current[i], fused[best], static_cast<int>(best)});
  }
  return result;
}

std::vector<Detection> CascadeInference(std::span<const Box> proposals,
                                        std::span<const StageHead> heads,
                                        const CascadeConfig& cfg) {
  return RunCascade(proposals, heads, cfg).detections;
}

std::vector<double> MaxIoU(std::span<const Box> proposals,
                           std::span<const Box> gts) {
  std::vector<double> out(proposals.size(), 0.0);
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    for (const Box& g : gts) out[i] = std::max(out[i], IoU(proposals[i], g));
  }
  return out;
}

std::size_t Histogram::total() const {
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  return n;
}

Histogram MakeHistogram(std::span<const double> values, std::size_t bins) {
  if (bins == 0) ThrowInvalid("histogram: need at least one bin");
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = static_cast<double>(i) / static_cast<double>(bins);
  }
  h.counts.assign(bins, 0);
  for (double v : values) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    const auto bin = std::min(
        static_cast<std::size_t>(clamped * static_cast<double>(bins)),
        bins - 1);
    ++h.counts[bin];
  }
  return h;
}

Histogram QualityDistribution(std::span<const Box> proposals,
                              std::span<const Box> gts, std::size_t bins) {
  if (gts.empty()) ThrowInvalid("quality_distribution: no ground truths");
  return MakeHistogram(MaxIoU(proposals, gts), bins);
}

double FractionAtLeast(std::span<const double> values, double threshold) {
  if (values.empty()) return 0.0;
  const auto n = std::count_if(values.begin(), values.end(),
                               [&](double v) { return v >= threshold; });
  return static_cast<double>(n) / static_cast<double>(values.size());
}

Delta LinearDeltaRegressor::Apply(const Delta& feature) const {
  return {slope[0] * feature.dx + intercept[0],
          slope[1] * feature.dy + intercept[1],
          slope[2] * feature.dw + intercept[2],
          slope[3] * feature.dh + intercept[3]};
}

namespace {

std::array<double, 4> Components(const Delta& d) {
  return {d.dx, d.dy, d.dw, d.dh};
}

}  // namespace

LinearDeltaRegressor FitLinearRegressor(std::span<const Delta> features,
                                        std::span<const Delta> targets) {
  if (features.size() != targets.size()) {
    ThrowInvalid("fit_linear_regressor: feature/target length mismatch");
  }
  LinearDeltaRegressor reg;
  const std::size_t n = features.size();
  if (n < 2) return reg;
  for (std::size_t k = 0; k < 4; ++k) {
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean_x += Components(features[i])[k];
      mean_y += Components(targets[i])[k];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = Components(features[i])[k] - mean_x;
      const double dy = Components(targets[i])[k] - mean_y;
      sxx += dx * dx;
      sxy += dx * dy;
    }
    if (sxx <= 0.0) continue;
    reg.slope[k] = sxy / sxx;
    reg.intercept[k] = mean_y - reg.slope[k] * mean_x;
  }
  return reg;
}

namespace {

struct Scene {
  std::vector<GroundTruth> gts;
  std::vector<Box> gt_boxes;
  std::vector<Box> proposals;
};

Scene MakeScene(const CascadeSimulationOptions& opt, std::size_t per_gt,
                Rng& rng) {
  Scene scene;
  for (std::size_t g = 0; g < opt.num_gts; ++g) {
    const double w = rng.Uniform(opt.min_gt_size, opt.max_gt_size);
    const double h = rng.Uniform(opt.min_gt_size, opt.max_gt_size);
    const double cx = rng.Uniform(0.5 * w, opt.image_size - 0.5 * w);
    const double cy = rng.Uniform(0.5 * h, opt.image_size - 0.5 * h);
    const Box gt = Box::FromCenter(cx, cy, w, h);
    scene.gts.push_back({gt, 1});
    scene.gt_boxes.push_back(gt);
    for (std::size_t p = 0; p < per_gt; ++p) {
      scene.proposals.push_back(Box::FromCenter(
          cx + rng.Normal(0.0, opt.center_jitter) * w,
          cy + rng.Normal(0.0, opt.center_jitter) * h,
          w * std::exp(rng.Normal(0.0, opt.size_jitter)),
          h * std::exp(rng.Normal(0.0, opt.size_jitter))));
    }
  }
  return scene;
}

// Noisy observation of the delta from each box to its best-matching ground
// truth.
std::vector<Delta> Observe(std::span<const Box> boxes,
                           std::span<const Assignment> assignments,
                           std::span<const Box> gt_boxes, double noise,
                           Rng& rng, std::vector<Delta>* truth) {
  std::vector<Delta> features(boxes.size());
  truth->assign(boxes.size(), Delta{});
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& gt = gt_boxes[assignments[i].matched_gt];
    const Delta d = Encode(boxes[i], gt);
    (*truth)[i] = d;
    features[i] = {d.dx + rng.Normal(0.0, noise), d.dy + rng.Normal(0.0, noise),
                   d.dw + rng.Normal(0.0, noise),
                   d.dh + rng.Normal(0.0, noise)};
  }
  return features;
}

// Assignment against the best-matching ground truth regardless of IoU, for
// boxes that still need a regression target.
std::vector<Assignment> NearestAssignments(std::span<const Box> boxes,
                                           std::span<const GroundTruth> gts) {
  std::vector<Assignment> a = AssignLabels(boxes, gts, 1e-12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].matched_gt >= 0) continue;
    // Disjoint from every gt: fall back to the closest centre.
    double best = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double dx = boxes[i].center_x() - gts[g].box.center_x();
      const double dy = boxes[i].center_y() - gts[g].box.center_y();
      const double d2 = dx * dx + dy * dy;
      if (best < 0.0 || d2 < best) {
        best = d2;
        a[i].matched_gt = static_cast<int>(g);
      }
    }
  }
  return a;
}

std::vector<Box> ApplyStage(std::span<const Box> boxes,
                            std::span<const GroundTruth> gts,
                            std::span<const Box> gt_boxes,
                            const LinearDeltaRegressor& reg, double noise,
                            Rng& rng) {
  const std::vector<Assignment> a = NearestAssignments(boxes, gts);
  std::vector<Delta> truth;
  std::vector<Delta> features = Observe(boxes, a, gt_boxes, noise, rng, &truth);
  for (Delta& f : features) f = reg.Apply(f);
  return Refine(boxes, features);
}

}  // namespace

CascadeSimulation SimulateCascade(const CascadeSimulationOptions& options,
                                  const CascadeConfig& cfg,
                                  std::uint64_t seed) {
  Validate(cfg);
  if (options.num_gts == 0 || options.train_proposals_per_gt == 0 ||
      options.test_proposals_per_gt == 0) {
    ThrowInvalid("simulate_cascade: empty scene");
  }
  if (!(options.min_gt_size > 0.0 && options.max_gt_size >= options.min_gt_size &&
        options.image_size > options.max_gt_size)) {
    ThrowInvalid("simulate_cascade: inconsistent box size range");
  }
  Rng rng(seed);
  const Scene train = MakeScene(options, options.train_proposals_per_gt, rng);
  const Scene test = MakeScene(options, options.test_proposals_per_gt, rng);

  CascadeSimulation sim;
  const double high = cfg.thresholds.back();
  auto record = [&](std::span<const Box> boxes) {
    std::vector<double> ious = MaxIoU(boxes, test.gt_boxes);
    sim.histograms.push_back(MakeHistogram(ious, options.histogram_bins));
    sim.fraction_high_quality.push_back(FractionAtLeast(ious, high));
    sim.ious.push_back(std::move(ious));
  };

  std::vector<Box> train_boxes = train.proposals;
  std::vector<Box> test_boxes = test.proposals;
  record(test_boxes);
  for (double u : cfg.thresholds) {
    const std::vector<Assignment> a = AssignLabels(train_boxes, train.gts, u);
    std::vector<Box> positives;
    std::vector<Assignment> matched;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].matched_gt < 0) continue;
      positives.push_back(train_boxes[i]);
      matched.push_back(a[i]);
    }
    std::vector<Delta> targets;
    const std::vector<Delta> features = Observe(
        positives, matched, train.gt_boxes, options.feature_noise, rng, &targets);
    const LinearDeltaRegressor reg = FitLinearRegressor(features, targets);
    sim.regressors.push_back(reg);

    train_boxes = ApplyStage(train_boxes, train.gts, train.gt_boxes, reg,
                             options.feature_noise, rng);
    test_boxes = ApplyStage(test_boxes, test.gts, test.gt_boxes, reg,
                            options.feature_noise, rng);
    record(test_boxes);
  }
  return sim;
}

}  // namespace uwdet
