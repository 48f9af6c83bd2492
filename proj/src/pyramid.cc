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

#include "uwdet/pyramid.h"

#include <algorithm>
#include <cmath>

#include "uwdet/error.h"

namespace uwdet {

void Validate(const PyramidSpec& spec) {
  if (spec.levels.empty()) ThrowInvalid("pyramid: no levels");
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    if (spec.levels[i].stride <= 0) ThrowInvalid("pyramid: stride must be > 0");
    if (i > 0 && spec.levels[i].stride != 2 * spec.levels[i - 1].stride) {
      ThrowInvalid("pyramid: strides must double from level to level");
    }
  }
  if (spec.scales.empty() || spec.ratios.empty()) {
    ThrowInvalid("pyramid: need at least one scale and one ratio");
  }
  for (double v : spec.scales) {
    if (!(v > 0.0)) ThrowInvalid("pyramid: scales must be positive");
  }
  for (double v : spec.ratios) {
    if (!(v > 0.0)) ThrowInvalid("pyramid: ratios must be positive");
  }
}

std::vector<std::vector<Box>> GenerateAnchors(const PyramidSpec& spec,
                                              int image_width,
                                              int image_height) {
  Validate(spec);
  if (image_width <= 0 || image_height <= 0) {
    ThrowInvalid("anchors: image size must be positive");
  }
  std::vector<std::vector<Box>> out;
  out.reserve(spec.levels.size());
  for (const PyramidLevel& level : spec.levels) {
    const int s = level.stride;
    const int cols = (image_width + s - 1) / s;
    const int rows = (image_height + s - 1) / s;
    std::vector<Box> anchors;
    anchors.reserve(static_cast<std::size_t>(rows) * cols *
                    spec.ratios.size() * spec.scales.size());
    for (int i = 0; i < rows; ++i) {
      const double cy = (i + 0.5) * s;
      for (int j = 0; j < cols; ++j) {
        const double cx = (j + 0.5) * s;
        for (double ratio : spec.ratios) {
          const double root = std::sqrt(ratio);
          for (double scale : spec.scales) {
            const double side = scale * s;
            anchors.push_back(
                Box::FromCenter(cx, cy, side / root, side * root));
          }
        }
      }
    }
    out.push_back(std::move(anchors));
  }
  return out;
}

std::size_t AssignLevel(const Box& box, const PyramidSpec& spec) {
  Validate(spec);
  const double area = Area(box);
  if (!(area > 0.0)) return 0;
  const double steps = std::floor(std::log2(std::sqrt(area) / kCanonicalBoxSize));
  // log2 of the wanted stride relative to the first level.
  const double target =
      4.0 + steps - std::log2(static_cast<double>(spec.levels[0].stride));
  const double last = static_cast<double>(spec.levels.size() - 1);
  return static_cast<std::size_t>(std::round(std::clamp(target, 0.0, last)));
}

Tensor ResizeTo(const Tensor& chw, std::size_t height, std::size_t width) {
  if (chw.dim(1) == height && chw.dim(2) == width) return chw;
  if (height > chw.dim(1) || width > chw.dim(2)) {
    return ResizeBilinear(chw, height, width);
  }
  return ResizeNearest(chw, height, width);
}

FeatureMap FuseLevels(std::span<const FeatureMap> maps) {
  if (maps.size() < 2) ThrowInvalid("fuse_levels: need at least two maps");
  for (const FeatureMap& m : maps) RequireRank(m.tensor, 3, "fuse_levels");
  const FeatureMap& middle = maps[maps.size() / 2];
  const std::size_t channels = middle.tensor.dim(0);
  const std::size_t height = middle.tensor.dim(1);
  const std::size_t width = middle.tensor.dim(2);
  for (const FeatureMap& m : maps) {
    if (m.tensor.dim(0) != channels) {
      ThrowInvalid("fuse_levels: channel counts differ between levels");
    }
  }
  Tensor sum({channels, height, width});
  for (const FeatureMap& m : maps) {
    const Tensor resized = ResizeTo(m.tensor, height, width);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += resized[i];
  }
  const double inv = 1.0 / static_cast<double>(maps.size());
  for (double& v : sum.data()) v *= inv;
  return {std::move(sum), middle.stride};
}

std::vector<FeatureMap> Redistribute(const FeatureMap& fused,
                                     std::span<const FeatureMap> originals) {
  RequireRank(fused.tensor, 3, "redistribute");
  std::vector<FeatureMap> out;
  out.reserve(originals.size());
  for (const FeatureMap& m : originals) {
    RequireRank(m.tensor, 3, "redistribute");
    if (m.tensor.dim(0) != fused.tensor.dim(0)) {
      ThrowInvalid("redistribute: channel mismatch");
    }
    const Tensor back = ResizeTo(fused.tensor, m.tensor.dim(1), m.tensor.dim(2));
    out.push_back({Add(m.tensor, back), m.stride});
  }
  return out;
}

}  // namespace uwdet
