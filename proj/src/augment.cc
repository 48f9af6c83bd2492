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

#include "uwdet/augment.h"

#include <algorithm>
#include <cmath>

#include "uwdet/error.h"
#include "uwdet/random.h"

namespace uwdet {

Sample MakeSample(Tensor image, std::vector<Box> boxes,
                  std::vector<int> labels) {
  Sample s{std::move(image), std::move(boxes), std::move(labels), {}};
  s.weights.assign(s.boxes.size(), 1.0);
  Validate(s);
  return s;
}

void Validate(const Sample& s) {
  RequireRank(s.image, 3, "sample image");
  if (s.labels.size() != s.boxes.size() || s.weights.size() != s.boxes.size()) {
    ThrowInvalid("sample: boxes, labels and weights differ in length");
  }
  const double w = static_cast<double>(s.width());
  const double h = static_cast<double>(s.height());
  for (const Box& b : s.boxes) {
    if (!IsValid(b) || b.x1 < 0.0 || b.y1 < 0.0 || b.x2 > w || b.y2 > h) {
      ThrowInvalid("sample: box outside the image");
    }
  }
}

Sample HFlip(const Sample& s) {
  Validate(s);
  Sample out = s;
  const std::size_t c = s.image.dim(0), h = s.height(), w = s.width();
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        out.image.at(ch, y, x) = s.image.at(ch, y, w - 1 - x);
      }
    }
  }
  const double W = static_cast<double>(w);
  for (Box& b : out.boxes) b = {W - b.x2, b.y1, W - b.x1, b.y2};
  return out;
}

Sample VFlip(const Sample& s) {
  Validate(s);
  Sample out = s;
  const std::size_t c = s.image.dim(0), h = s.height(), w = s.width();
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        out.image.at(ch, y, x) = s.image.at(ch, h - 1 - y, x);
      }
    }
  }
  const double H = static_cast<double>(h);
  for (Box& b : out.boxes) b = {b.x1, H - b.y2, b.x2, H - b.y1};
  return out;
}

namespace {

Sample RotateQuarter(const Sample& s) {
  const std::size_t c = s.image.dim(0), h = s.height(), w = s.width();
  Sample out = s;
  out.image = Tensor({c, w, h});
  // new(y', x') = old(y = x', x = w - 1 - y')
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t ny = 0; ny < w; ++ny) {
      for (std::size_t nx = 0; nx < h; ++nx) {
        out.image.at(ch, ny, nx) = s.image.at(ch, nx, w - 1 - ny);
      }
    }
  }
  const double W = static_cast<double>(w);
  for (Box& b : out.boxes) b = {b.y1, W - b.x2, b.y2, W - b.x1};
  return out;
}

}  // namespace

Sample Rotate90(const Sample& s, int k) {
  if (k < 1 || k > 3) ThrowInvalid("rotate90: k must be 1, 2 or 3");
  Validate(s);
  Sample out = RotateQuarter(s);
  for (int i = 1; i < k; ++i) out = RotateQuarter(out);
  return out;
}

Sample Cutout(const Sample& s, std::span<const Box> rects, double fill) {
  Validate(s);
  Sample out = s;
  const std::size_t c = s.image.dim(0), h = s.height(), w = s.width();
  for (const Box& r : rects) {
    if (!IsValid(r)) ThrowInvalid("cutout: invalid rectangle");
    for (std::size_t y = 0; y < h; ++y) {
      const double cy = static_cast<double>(y) + 0.5;
      if (cy < r.y1 || cy >= r.y2) continue;
      for (std::size_t x = 0; x < w; ++x) {
        const double cx = static_cast<double>(x) + 0.5;
        if (cx < r.x1 || cx >= r.x2) continue;
        for (std::size_t ch = 0; ch < c; ++ch) out.image.at(ch, y, x) = fill;
      }
    }
  }
  return out;
}

Sample Mixup(const Sample& a, const Sample& b, double lam) {
  Validate(a);
  Validate(b);
  if (!(lam >= 0.0 && lam <= 1.0)) ThrowInvalid("mixup: lam must lie in [0, 1]");
  if (a.image.shape() != b.image.shape()) {
    ThrowInvalid("mixup: images differ in shape");
  }
  Sample out = a;
  for (std::size_t i = 0; i < out.image.size(); ++i) {
    out.image[i] = lam * a.image[i] + (1.0 - lam) * b.image[i];
  }
  for (double& w : out.weights) w *= lam;
  out.boxes.insert(out.boxes.end(), b.boxes.begin(), b.boxes.end());
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  for (double w : b.weights) out.weights.push_back(w * (1.0 - lam));
  return out;
}

Sample Resize(const Sample& s, std::size_t width, std::size_t height) {
  Validate(s);
  if (width == 0 || height == 0) ThrowInvalid("resize: target must be positive");
  Sample out = s;
  out.image = ResizeBilinear(s.image, height, width);
  const double sx = static_cast<double>(width) / static_cast<double>(s.width());
  const double sy =
      static_cast<double>(height) / static_cast<double>(s.height());
  const double W = static_cast<double>(width);
  const double H = static_cast<double>(height);
  for (Box& b : out.boxes) {
    // min() absorbs rounding at the right and bottom edges.
    b = {std::min(b.x1 * sx, W), std::min(b.y1 * sy, H), std::min(b.x2 * sx, W),
         std::min(b.y2 * sy, H)};
  }
  return out;
}

std::vector<Box> BBoxJitter(std::span<const Box> boxes, double magnitude,
                            std::uint64_t seed,
                            std::optional<std::pair<double, double>> bounds) {
  if (!(magnitude >= 0.0)) ThrowInvalid("bbox_jitter: magnitude must be >= 0");
  std::vector<Box> out(boxes.begin(), boxes.end());
  if (magnitude == 0.0) return out;
  Rng rng(seed);
  for (Box& b : out) {
    const double mx = magnitude * b.width();
    const double my = magnitude * b.height();
    const double x1 = b.x1 + rng.Uniform(-mx, mx);
    const double y1 = b.y1 + rng.Uniform(-my, my);
    const double x2 = b.x2 + rng.Uniform(-mx, mx);
    const double y2 = b.y2 + rng.Uniform(-my, my);
    b = {std::min(x1, x2), std::min(y1, y2), std::max(x1, x2), std::max(y1, y2)};
    if (bounds) b = Clip(b, bounds->first, bounds->second);
  }
  return out;
}

Sample BBoxJitter(const Sample& s, double magnitude, std::uint64_t seed) {
  Validate(s);
  Sample out = s;
  out.boxes = BBoxJitter(s.boxes, magnitude, seed,
                         std::make_pair(static_cast<double>(s.width()),
                                        static_cast<double>(s.height())));
  return out;
}

}  // namespace uwdet
