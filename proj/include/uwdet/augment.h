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

#ifndef UWDET_AUGMENT_H_
#define UWDET_AUGMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uwdet/geometry.h"
#include "uwdet/tensor.h"

namespace uwdet {

// A training image (C, H, W) with its boxes. labels and weights run parallel
// to boxes; weights carry mixup blending factors.
struct Sample {
  Tensor image;
  std::vector<Box> boxes;
  std::vector<int> labels;
  std::vector<double> weights;

  std::size_t width() const { return image.dim(2); }
  std::size_t height() const { return image.dim(1); }
};

// Sample with unit weights.
Sample MakeSample(Tensor image, std::vector<Box> boxes, std::vector<int> labels);

// Throws kInvalidArgument on a non-(C,H,W) image, mismatched list lengths
// or a box outside the image.
void Validate(const Sample& s);

// Mirror about the vertical (hflip) or horizontal (vflip) centre line.
Sample HFlip(const Sample& s);
Sample VFlip(const Sample& s);

// Counter-clockwise rotation by k * 90 degrees, k in {1, 2, 3}. A point
// (x, y) of a W-wide image maps to (y, W - x) per quarter turn.
Sample Rotate90(const Sample& s, int k);

// Sets every pixel whose centre lies in one of rects to fill.
Sample Cutout(const Sample& s, std::span<const Box> rects, double fill);

// lam * a + (1 - lam) * b with both box sets kept; a's weights are scaled by
// lam and b's by 1 - lam.
Sample Mixup(const Sample& a, const Sample& b, double lam);

// Bilinear resize to width x height with boxes scaled to match.
Sample Resize(const Sample& s, std::size_t width, std::size_t height);

// Perturbs each coordinate by uniform noise of up to magnitude times the
// box side along that axis, then re-sorts corners and, when bounds
// (width, height) are given, clips. Deterministic for a seed; magnitude 0
// returns the input.
std::vector<Box> BBoxJitter(std::span<const Box> boxes, double magnitude,
                            std::uint64_t seed,
                            std::optional<std::pair<double, double>> bounds =
                                std::nullopt);

// Jitters the sample's boxes, clipped to the image.
Sample BBoxJitter(const Sample& s, double magnitude, std::uint64_t seed);

}  // namespace uwdet

#endif  // UWDET_AUGMENT_H_
