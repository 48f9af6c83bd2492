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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "uwdet/error.h"

namespace uwdet {

std::vector<MatchOutcome> Match(std::span<const Detection> dets,
                                std::span<const GtBox> gts,
                                double iou_threshold) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dets[a].score > dets[b].score;
                   });
  std::vector<bool> used(gts.size(), false);
  std::vector<MatchOutcome> out(dets.size(), MatchOutcome::kFalsePositive);
  for (std::size_t idx : order) {
    const Box& box = dets[idx].box;
    double best_iou = iou_threshold;
    std::ptrdiff_t best = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g] || gts[g].iscrowd) continue;
      const double iou = IoU(box, gts[g].box);
      if (iou >= best_iou && (best < 0 || iou > best_iou)) {
        best_iou = iou;
        best = static_cast<std::ptrdiff_t>(g);
      }
    }
    if (best >= 0) {
      used[best] = true;
      out[idx] = MatchOutcome::kTruePositive;
      continue;
    }
    const double area = Area(box);
    for (const GtBox& gt : gts) {
      if (!gt.iscrowd || area <= 0.0) continue;
      if (IntersectionArea(box, gt.box) / area >= iou_threshold) {
        out[idx] = MatchOutcome::kIgnored;
        break;
      }
    }
  }
  return out;
}

std::vector<MatchOutcome> Match(std::span<const Detection> dets,
                                std::span<const Box> gts,
                                double iou_threshold) {
  std::vector<GtBox> wrapped;
  wrapped.reserve(gts.size());
  for (const Box& b : gts) wrapped.push_back({b, false});
  return Match(dets, wrapped, iou_threshold);
}

std::optional<double> AveragePrecision(std::span<const MatchOutcome> ranked,
                                       std::size_t num_gt) {
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (MatchOutcome m : ranked) {
    if (m == MatchOutcome::kIgnored) continue;
    (m == MatchOutcome::kTruePositive ? tp : fp) += 1;
    if (num_gt > 0) {
      recall.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
      precision.push_back(static_cast<double>(tp) /
                          static_cast<double>(tp + fp));
    }
  }
  if (num_gt == 0) {
    if (tp + fp == 0) return std::nullopt;
    return 0.0;
  }
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  constexpr int kRecallPoints = 101;
  double sum = 0.0;
  for (int k = 0; k < kRecallPoints; ++k) {
    const double r = static_cast<double>(k) / (kRecallPoints - 1);
    auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) sum += precision[it - recall.begin()];
  }
  return sum / kRecallPoints;
}

std::vector<double> IouThresholds(double min, double max, double step) {
  if (!(min > 0.0 && min <= max && max <= 1.0 && step > 0.0)) {
    ThrowInvalid("iou thresholds: need 0 < min <= max <= 1 and step > 0");
  }
  const auto count =
      static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = min + static_cast<double>(i) * step;
  }
  return out;
}

namespace {

struct RankedDetection {
  std::int64_t image_id;
  Detection det;
};

// Total order used everywhere a ranking is needed.
bool RankBefore(const RankedDetection& a, const RankedDetection& b) {
  if (a.det.score != b.det.score) return a.det.score > b.det.score;
  return std::tie(a.image_id, a.det.class_id, a.det.box.x1, a.det.box.y1,
                  a.det.box.x2, a.det.box.y2) <
         std::tie(b.image_id, b.det.class_id, b.det.box.x1, b.det.box.y1,
                  b.det.box.x2, b.det.box.y2);
}

}  // namespace

EvalResult EvaluateMap(std::span<const ResultRecord> results,
                       const Dataset& dataset, const EvalOptions& options) {
  if (dataset.images.empty()) ThrowInvalid("evaluate: dataset has no images");
  if (options.iou_thresholds.empty()) ThrowInvalid("evaluate: no thresholds");
  CheckResultsAgainst(std::vector<ResultRecord>(results.begin(), results.end()),
                      dataset);

  using Key = std::pair<int, std::int64_t>;  // (category, image)
  std::map<Key, std::vector<GtBox>> gts;
  std::map<int, std::size_t> num_gt;
  for (const Annotation& a : dataset.annotations) {
    gts[{a.category_id, a.image_id}].push_back({a.box, a.iscrowd});
    if (!a.iscrowd) ++num_gt[a.category_id];
  }
  std::map<Key, std::vector<RankedDetection>> dets;
  for (const ResultRecord& r : results) {
    dets[{r.detection.class_id, r.image_id}].push_back({r.image_id, r.detection});
  }
  for (auto& [key, list] : dets) {
    std::sort(list.begin(), list.end(), RankBefore);
    if (options.max_detections && list.size() > *options.max_detections) {
      list.resize(*options.max_detections);
    }
  }

  EvalResult result;
  result.iou_thresholds = options.iou_thresholds;
  const std::size_t num_thr = options.iou_thresholds.size();
  for (const Category& cat : dataset.categories) {
    ClassResult cr;
    cr.category_id = cat.id;
    cr.name = cat.name;
    cr.num_gt = num_gt[cat.id];

    // Per-image outcomes for every threshold, then one global ranking.
    std::vector<std::pair<RankedDetection, std::vector<MatchOutcome>>> ranked;
    for (auto it = dets.lower_bound({cat.id, std::numeric_limits<std::int64_t>::min()});
         it != dets.end() && it->first.first == cat.id; ++it) {
      const std::vector<RankedDetection>& list = it->second;
      std::vector<Detection> plain;
      plain.reserve(list.size());
      for (const RankedDetection& r : list) plain.push_back(r.det);
      auto gt_it = gts.find(it->first);
      const std::span<const GtBox> image_gts =
          gt_it == gts.end() ? std::span<const GtBox>()
                             : std::span<const GtBox>(gt_it->second);
      std::vector<std::vector<MatchOutcome>> per_thr;
      for (double thr : options.iou_thresholds) {
        per_thr.push_back(Match(plain, image_gts, thr));
      }
      for (std::size_t i = 0; i < list.size(); ++i) {
        std::vector<MatchOutcome> outcomes(num_thr);
        for (std::size_t t = 0; t < num_thr; ++t) outcomes[t] = per_thr[t][i];
        ranked.emplace_back(list[i], std::move(outcomes));
      }
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return RankBefore(a.first, b.first);
    });
    cr.num_detections = ranked.size();

    double sum = 0.0;
    std::size_t defined = 0;
    std::vector<MatchOutcome> column(ranked.size());
    for (std::size_t t = 0; t < num_thr; ++t) {
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        column[i] = ranked[i].second[t];
      }
      const std::optional<double> ap = AveragePrecision(column, cr.num_gt);
      cr.ap_per_threshold.push_back(ap);
      if (ap) {
        sum += *ap;
        ++defined;
      }
    }
    if (defined > 0) cr.ap = sum / static_cast<double>(defined);
    result.classes.push_back(std::move(cr));
  }

  std::size_t evaluated = 0;
  double total = 0.0;
  result.map_per_threshold.assign(num_thr, 0.0);
  std::vector<std::size_t> per_thr_count(num_thr, 0);
  for (const ClassResult& cr : result.classes) {
    if (!cr.ap) continue;
    ++evaluated;
    total += *cr.ap;
    for (std::size_t t = 0; t < num_thr; ++t) {
      if (cr.ap_per_threshold[t]) {
        result.map_per_threshold[t] += *cr.ap_per_threshold[t];
        ++per_thr_count[t];
      }
    }
  }
  if (evaluated == 0) {
    ThrowInvalid("evaluate: no category has ground truth or detections");
  }
  for (std::size_t t = 0; t < num_thr; ++t) {
    if (per_thr_count[t] > 0) {
      result.map_per_threshold[t] /= static_cast<double>(per_thr_count[t]);
    }
  }
  result.map = total / static_cast<double>(evaluated);
  return result;
}

nlohmann::json ToJson(const EvalResult& result) {
  nlohmann::json classes = nlohmann::json::array();
  for (const ClassResult& cr : result.classes) {
    nlohmann::json per_thr = nlohmann::json::array();
    for (const auto& ap : cr.ap_per_threshold) {
      per_thr.push_back(ap ? nlohmann::json(*ap) : nlohmann::json(nullptr));
    }
    classes.push_back({{"category_id", cr.category_id},
                       {"name", cr.name},
                       {"num_gt", cr.num_gt},
                       {"num_detections", cr.num_detections},
                       {"ap_per_threshold", per_thr},
                       {"ap", cr.ap ? nlohmann::json(*cr.ap)
                                    : nlohmann::json(nullptr)}});
  }
  return {{"iou_thresholds", result.iou_thresholds},
          {"classes", classes},
          {"map_per_threshold", result.map_per_threshold},
          {"map", result.map}};
}

std::string FormatTable(const EvalResult& result) {
  std::string out;
  out += fmt::format("{:<6} {:<14} {:>6} {:>6}", "id", "category", "gt", "dets");
  for (double t : result.iou_thresholds) out += fmt::format(" {:>6.2f}", t);
  out += fmt::format(" {:>8}\n", "AP");
  for (const ClassResult& cr : result.classes) {
    out += fmt::format("{:<6} {:<14} {:>6} {:>6}", cr.category_id, cr.name,
                       cr.num_gt, cr.num_detections);
    for (const auto& ap : cr.ap_per_threshold) {
      out += ap ? fmt::format(" {:>6.4f}", *ap) : fmt::format(" {:>6}", "-");
    }
    out += cr.ap ? fmt::format(" {:>8.4f}\n", *cr.ap)
                 : fmt::format(" {:>8}\n", "-");
  }
  const double lo = result.iou_thresholds.front();
  const double hi = result.iou_thresholds.back();
  out += fmt::format("mAP@[{:.2f}:{:.2f}] = {:.4f}\n", lo, hi, result.map);
  return out;
}

}  // namespace uwdet
