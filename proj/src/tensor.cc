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

#include "uwdet/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "uwdet/error.h"

namespace uwdet {
namespace {

std::size_t Product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(Product(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != Product(shape_)) {
    ThrowInvalid("tensor: data length " + std::to_string(data_.size()) +
                 " does not match shape");
  }
}

Tensor Tensor::Reshaped(std::vector<std::size_t> shape) const {
  return Tensor(std::move(shape), data_);
}

void RequireRank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    ThrowInvalid(std::string(what) + ": expected rank " +
                 std::to_string(rank) + ", got " + std::to_string(t.rank()));
  }
}

Tensor Add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) ThrowInvalid("add: shape mismatch");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Tensor ResizeBilinear(const Tensor& chw, std::size_t height,
                      std::size_t width) {
  RequireRank(chw, 3, "resize_bilinear");
  const std::size_t channels = chw.dim(0);
  const std::size_t in_h = chw.dim(1);
  const std::size_t in_w = chw.dim(2);
  if (height == 0 || width == 0 || in_h == 0 || in_w == 0) {
    ThrowInvalid("resize_bilinear: empty spatial size");
  }
  const double scale_y = static_cast<double>(in_h) / height;
  const double scale_x = static_cast<double>(in_w) / width;

  struct Tap {
    std::size_t lo, hi;
    double frac;
  };
  auto taps = [](std::size_t out, std::size_t in, double scale) {
    std::vector<Tap> t(out);
    for (std::size_t i = 0; i < out; ++i) {
      double src = (static_cast<double>(i) + 0.5) * scale - 0.5;
      src = std::clamp(src, 0.0, static_cast<double>(in - 1));
      const auto lo = static_cast<std::size_t>(std::floor(src));
      const std::size_t hi = std::min(lo + 1, in - 1);
      t[i] = {lo, hi, src - static_cast<double>(lo)};
    }
    return t;
  };
  const std::vector<Tap> ty = taps(height, in_h, scale_y);
  const std::vector<Tap> tx = taps(width, in_w, scale_x);

  Tensor out({channels, height, width});
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t y = 0; y < height; ++y) {
      const Tap& a = ty[y];
      for (std::size_t x = 0; x < width; ++x) {
        const Tap& b = tx[x];
        const double top = (1.0 - b.frac) * chw.at(c, a.lo, b.lo) +
                           b.frac * chw.at(c, a.lo, b.hi);
        const double bottom = (1.0 - b.frac) * chw.at(c, a.hi, b.lo) +
                              b.frac * chw.at(c, a.hi, b.hi);
        out.at(c, y, x) = (1.0 - a.frac) * top + a.frac * bottom;
      }
    }
  }
  return out;
}

Tensor ResizeNearest(const Tensor& chw, std::size_t height,
                     std::size_t width) {
  RequireRank(chw, 3, "resize_nearest");
  const std::size_t channels = chw.dim(0);
  const std::size_t in_h = chw.dim(1);
  const std::size_t in_w = chw.dim(2);
  if (height == 0 || width == 0 || in_h == 0 || in_w == 0) {
    ThrowInvalid("resize_nearest: empty spatial size");
  }
  Tensor out({channels, height, width});
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t y = 0; y < height; ++y) {
      const std::size_t sy = std::min(y * in_h / height, in_h - 1);
      for (std::size_t x = 0; x < width; ++x) {
        const std::size_t sx = std::min(x * in_w / width, in_w - 1);
        out.at(c, y, x) = chw.at(c, sy, sx);
      }
    }
  }
  return out;
}

}  // namespace uwdet
