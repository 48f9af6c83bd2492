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

#ifndef UWDET_PYRAMID_H_
#define UWDET_PYRAMID_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uwdet/geometry.h"
#include "uwdet/tensor.h"

namespace uwdet {

struct PyramidLevel {
  std::string name;
  int stride = 0;
};

// Feature pyramid layout plus the anchor shapes tiled on every level.
// Anchor side for scale s on a level of stride t is s * t; ratio r = h / w.
struct PyramidSpec {
  std::vector<PyramidLevel> levels = {
      {"C2", 4}, {"C3", 8}, {"C4", 16}, {"C5", 32}};
  std::vector<double> scales = {8.0};
  std::vector<double> ratios = {0.5, 1.0, 2.0};
};

// Throws kInvalidArgument unless there is at least one level, strides are
// positive and double from level to level, and scales/ratios are positive.
void Validate(const PyramidSpec& spec);

// One anchor list per level. Within a level anchors are ordered by cell
// (row-major), then ratio, then scale; cell (i, j) is centred at
// ((j + 0.5) * stride, (i + 0.5) * stride). A level of stride s has
// ceil(w / s) * ceil(h / s) cells.
std::vector<std::vector<Box>> GenerateAnchors(const PyramidSpec& spec,
                                              int image_width,
                                              int image_height);

// Canonical box size mapped to the stride-16 level.
inline constexpr double kCanonicalBoxSize = 224.0;

// Level whose stride is 16 * 2^floor(log2(sqrt(w*h) / 224)), clamped to the
// pyramid. Zero-area boxes map to level 0.
std::size_t AssignLevel(const Box& box, const PyramidSpec& spec);

struct FeatureMap {
  Tensor tensor;  // (C, H, W)
  int stride = 0;
};

// Resizes every map to the spatial size of maps[L / 2] (bilinear when
// growing, nearest when shrinking) and averages them elementwise. Requires
// at least two maps with equal channel counts.
FeatureMap FuseLevels(std::span<const FeatureMap> maps);

// Resizes the fused map back to each original's size and adds it.
std::vector<FeatureMap> Redistribute(const FeatureMap& fused,
                                     std::span<const FeatureMap> originals);

// Bilinear when either side grows, nearest otherwise.
Tensor ResizeTo(const Tensor& chw, std::size_t height, std::size_t width);

}  // namespace uwdet

#endif  // UWDET_PYRAMID_H_
