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

#include "uwdet/suppression.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uwdet/error.h"

namespace uwdet {
namespace {

void CheckThreshold(double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    ThrowInvalid("suppression: iou threshold must lie in (0, 1]");
  }
}

// Indices sorted by descending score, ties by ascending index.
std::vector<std::size_t> ScoreOrder(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dets[a].score > dets[b].score;
                   });
  return order;
}

}  // namespace

std::vector<Detection> Nms(std::span<const Detection> dets,
                           double iou_threshold, bool class_agnostic) {
  CheckThreshold(iou_threshold);
  const std::vector<std::size_t> order = ScoreOrder(dets);
  std::vector<bool> suppressed(dets.size(), false);
  std::vector<Detection> kept;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (suppressed[i]) continue;
    const Detection& anchor = dets[order[i]];
    kept.push_back(anchor);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (suppressed[j]) continue;
      const Detection& other = dets[order[j]];
      if (!class_agnostic && other.class_id != anchor.class_id) continue;
      if (IoU(anchor.box, other.box) >= iou_threshold) suppressed[j] = true;
    }
  }
  return kept;
}

std::vector<Detection> SoftNms(std::span<const Detection> dets,
                               const SoftNmsOptions& options) {
  CheckThreshold(options.iou_threshold);
  if (!(options.sigma > 0.0)) ThrowInvalid("soft_nms: sigma must be positive");

  // Working set in input order; the original index breaks score ties.
  struct Candidate {
    Detection det;
    std::size_t index;
  };
  std::vector<Candidate> pool;
  pool.reserve(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].score >= options.score_floor) pool.push_back({dets[i], i});
  }

  std::vector<Detection> out;
  while (!pool.empty()) {
    auto best = std::min_element(
        pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
          if (a.det.score != b.det.score) return a.det.score > b.det.score;
          return a.index < b.index;
        });
    const Detection selected = best->det;
    pool.erase(best);
    out.push_back(selected);

    std::erase_if(pool, [&](Candidate& c) {
      if (!options.class_agnostic && c.det.class_id != selected.class_id) {
        return false;
      }
      const double iou = IoU(selected.box, c.det.box);
      if (options.method == SoftNmsMethod::kLinear) {
        if (iou > options.iou_threshold) c.det.score *= 1.0 - iou;
      } else {
        c.det.score *= std::exp(-(iou * iou) / options.sigma);
      }
      return c.det.score < options.score_floor;
    });
  }
  return out;
}

std::vector<Detection> FilterByScore(std::span<const Detection> dets,
                                     double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    ThrowInvalid("filter_by_score: threshold must lie in [0, 1]");
  }
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [&](const Detection& d) { return d.score >= threshold; });
  return out;
}

}  // namespace uwdet
