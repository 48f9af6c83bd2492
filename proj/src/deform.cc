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

#include "uwdet/deform.h"

#include <cmath>
#include <string>
#include <tuple>
#include <utility>

#include "uwdet/error.h"

namespace uwdet {
namespace {

std::array<BilinearTap, 4> Taps(std::size_t height, std::size_t width,
                                double x, double y) {
  const double fy = std::floor(y);
  const double fx = std::floor(x);
  const double ly = y - fy;
  const double lx = x - fx;
  const auto y0 = static_cast<std::ptrdiff_t>(fy);
  const auto x0 = static_cast<std::ptrdiff_t>(fx);
  std::array<BilinearTap, 4> taps = {{
      {y0, x0, (1.0 - ly) * (1.0 - lx), false},
      {y0, x0 + 1, (1.0 - ly) * lx, false},
      {y0 + 1, x0, ly * (1.0 - lx), false},
      {y0 + 1, x0 + 1, ly * lx, false},
  }};
  for (BilinearTap& t : taps) {
    t.in_bounds = t.y >= 0 && t.x >= 0 &&
                  t.y < static_cast<std::ptrdiff_t>(height) &&
                  t.x < static_cast<std::ptrdiff_t>(width);
    if (!t.in_bounds) t.weight = 0.0;
  }
  return taps;
}

// Far-away points would overflow the ptrdiff_t conversion; they sample
// nothing anyway.
bool Reachable(std::size_t height, std::size_t width, double x, double y) {
  return std::isfinite(x) && std::isfinite(y) && y > -1.0 && x > -1.0 &&
         y < static_cast<double>(height) && x < static_cast<double>(width);
}

double SampleChannel(const Tensor& map, std::size_t c, double x, double y) {
  const std::size_t h = map.dim(1);
  const std::size_t w = map.dim(2);
  if (!Reachable(h, w, x, y)) return 0.0;
  double v = 0.0;
  for (const BilinearTap& t : Taps(h, w, x, y)) {
    if (t.in_bounds) v += t.weight * map.at(c, t.y, t.x);
  }
  return v;
}

// Value of map[c] at a neighbour, zero outside.
double Pixel(const Tensor& map, std::size_t c, std::ptrdiff_t y,
             std::ptrdiff_t x) {
  if (y < 0 || x < 0 || y >= static_cast<std::ptrdiff_t>(map.dim(1)) ||
      x >= static_cast<std::ptrdiff_t>(map.dim(2))) {
    return 0.0;
  }
  return map.at(c, y, x);
}

// d/dx and d/dy of SampleChannel.
std::pair<double, double> SampleChannelGrad(const Tensor& map, std::size_t c,
                                            double x, double y) {
  if (!Reachable(map.dim(1), map.dim(2), x, y)) return {0.0, 0.0};
  const double fy = std::floor(y);
  const double fx = std::floor(x);
  const double ly = y - fy;
  const double lx = x - fx;
  const auto y0 = static_cast<std::ptrdiff_t>(fy);
  const auto x0 = static_cast<std::ptrdiff_t>(fx);
  const double v00 = Pixel(map, c, y0, x0);
  const double v01 = Pixel(map, c, y0, x0 + 1);
  const double v10 = Pixel(map, c, y0 + 1, x0);
  const double v11 = Pixel(map, c, y0 + 1, x0 + 1);
  const double ddx = (1.0 - ly) * (v01 - v00) + ly * (v11 - v10);
  const double ddy = (1.0 - lx) * (v10 - v00) + lx * (v11 - v01);
  return {ddx, ddy};
}

}  // namespace

std::vector<double> BilinearSample(const Tensor& map, double x, double y) {
  RequireRank(map, 3, "bilinear_sample");
  std::vector<double> out(map.dim(0));
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = SampleChannel(map, c, x, y);
  }
  return out;
}

BilinearGrad BilinearSampleGrad(const Tensor& map, double x, double y) {
  RequireRank(map, 3, "bilinear_sample_grad");
  BilinearGrad g;
  g.d_dx.resize(map.dim(0));
  g.d_dy.resize(map.dim(0));
  for (std::size_t c = 0; c < map.dim(0); ++c) {
    std::tie(g.d_dx[c], g.d_dy[c]) = SampleChannelGrad(map, c, x, y);
  }
  if (Reachable(map.dim(1), map.dim(2), x, y)) {
    g.taps = Taps(map.dim(1), map.dim(2), x, y);
  }
  return g;
}

DeformConvShape CheckDeformConv(const Tensor& input, const Tensor& weight,
                                const Tensor& offsets, std::size_t stride,
                                std::size_t pad) {
  RequireRank(input, 3, "deform_conv2d input");
  RequireRank(weight, 4, "deform_conv2d weight");
  RequireRank(offsets, 3, "deform_conv2d offsets");
  if (stride == 0) ThrowInvalid("deform_conv2d: stride must be positive");
  DeformConvShape s{};
  s.in_channels = input.dim(0);
  s.height = input.dim(1);
  s.width = input.dim(2);
  s.out_channels = weight.dim(0);
  s.kernel = weight.dim(2);
  if (weight.dim(1) != s.in_channels) {
    ThrowInvalid("deform_conv2d: weight input channels do not match input");
  }
  if (weight.dim(3) != s.kernel || s.kernel == 0) {
    ThrowInvalid("deform_conv2d: kernel must be square and non-empty");
  }
  const std::size_t padded_h = s.height + 2 * pad;
  const std::size_t padded_w = s.width + 2 * pad;
  if (padded_h < s.kernel || padded_w < s.kernel ||
      (padded_h - s.kernel) % stride != 0 ||
      (padded_w - s.kernel) % stride != 0) {
    ThrowInvalid("deform_conv2d: (H + 2*pad - K) / stride is not integral");
  }
  s.out_height = (padded_h - s.kernel) / stride + 1;
  s.out_width = (padded_w - s.kernel) / stride + 1;
  if (offsets.dim(0) != 2 * s.kernel * s.kernel ||
      offsets.dim(1) != s.out_height || offsets.dim(2) != s.out_width) {
    ThrowInvalid("deform_conv2d: offsets must have shape (2*K*K, H', W') = (" +
                 std::to_string(2 * s.kernel * s.kernel) + ", " +
                 std::to_string(s.out_height) + ", " +
                 std::to_string(s.out_width) + ")");
  }
  return s;
}

namespace {

struct SamplePoint {
  double y, x;
};

SamplePoint TapPosition(const Tensor& offsets, std::size_t kernel,
                        std::size_t stride, std::size_t pad, std::size_t oy,
                        std::size_t ox, std::size_t i, std::size_t j) {
  const std::size_t tap = i * kernel + j;
  const double base_y = static_cast<double>(oy * stride + i) -
                        static_cast<double>(pad);
  const double base_x = static_cast<double>(ox * stride + j) -
                        static_cast<double>(pad);
  return {base_y + offsets.at(2 * tap, oy, ox),
          base_x + offsets.at(2 * tap + 1, oy, ox)};
}

}  // namespace

Tensor DeformConv2d(const Tensor& input, const Tensor& weight,
                    const Tensor& offsets, std::size_t stride,
                    std::size_t pad) {
  const DeformConvShape s = CheckDeformConv(input, weight, offsets, stride, pad);
  Tensor out({s.out_channels, s.out_height, s.out_width});
  std::vector<double> column(s.in_channels);
  for (std::size_t oy = 0; oy < s.out_height; ++oy) {
    for (std::size_t ox = 0; ox < s.out_width; ++ox) {
      for (std::size_t i = 0; i < s.kernel; ++i) {
        for (std::size_t j = 0; j < s.kernel; ++j) {
          const SamplePoint p =
              TapPosition(offsets, s.kernel, stride, pad, oy, ox, i, j);
          for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
            column[ci] = SampleChannel(input, ci, p.x, p.y);
          }
          for (std::size_t co = 0; co < s.out_channels; ++co) {
            double acc = 0.0;
            for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
              acc += weight.at(co, ci, i, j) * column[ci];
            }
            out.at(co, oy, ox) += acc;
          }
        }
      }
    }
  }
  return out;
}

DeformConvGrads DeformConv2dGrad(const Tensor& input, const Tensor& weight,
                                 const Tensor& offsets,
                                 const Tensor& grad_output, std::size_t stride,
                                 std::size_t pad) {
  const DeformConvShape s = CheckDeformConv(input, weight, offsets, stride, pad);
  if (grad_output.shape() !=
      std::vector<std::size_t>{s.out_channels, s.out_height, s.out_width}) {
    ThrowInvalid("deform_conv2d_grad: grad_output shape mismatch");
  }
  DeformConvGrads g{Tensor(input.shape()), Tensor(weight.shape()),
                    Tensor(offsets.shape())};
  // Upstream gradient routed back through the weights, per input channel.
  std::vector<double> back(s.in_channels);
  for (std::size_t oy = 0; oy < s.out_height; ++oy) {
    for (std::size_t ox = 0; ox < s.out_width; ++ox) {
      for (std::size_t i = 0; i < s.kernel; ++i) {
        for (std::size_t j = 0; j < s.kernel; ++j) {
          const SamplePoint p =
              TapPosition(offsets, s.kernel, stride, pad, oy, ox, i, j);
          const bool reachable = Reachable(s.height, s.width, p.x, p.y);
          for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
            double acc = 0.0;
            for (std::size_t co = 0; co < s.out_channels; ++co) {
              acc += grad_output.at(co, oy, ox) * weight.at(co, ci, i, j);
            }
            back[ci] = acc;
          }
          if (!reachable) continue;

          const std::array<BilinearTap, 4> taps =
              Taps(s.height, s.width, p.x, p.y);
          double d_offset_y = 0.0;
          double d_offset_x = 0.0;
          for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
            const double value = SampleChannel(input, ci, p.x, p.y);
            for (std::size_t co = 0; co < s.out_channels; ++co) {
              g.weight.at(co, ci, i, j) += grad_output.at(co, oy, ox) * value;
            }
            for (const BilinearTap& t : taps) {
              if (t.in_bounds) g.input.at(ci, t.y, t.x) += back[ci] * t.weight;
            }
            const auto [ddx, ddy] = SampleChannelGrad(input, ci, p.x, p.y);
            d_offset_x += back[ci] * ddx;
            d_offset_y += back[ci] * ddy;
          }
          const std::size_t tap = i * s.kernel + j;
          g.offsets.at(2 * tap, oy, ox) += d_offset_y;
          g.offsets.at(2 * tap + 1, oy, ox) += d_offset_x;
        }
      }
    }
  }
  return g;
}

Tensor ZeroRoiOffsets(std::size_t bins) { return Tensor({2, bins, bins}); }

Tensor DeformRoiPool(const Tensor& features, const Box& roi, std::size_t bins,
                     const Tensor& offsets) {
  RequireRank(features, 3, "deform_roi_pool");
  if (bins == 0) ThrowInvalid("deform_roi_pool: bins must be positive");
  if (!IsValid(roi) || !(roi.width() > 0.0 && roi.height() > 0.0)) {
    ThrowInvalid("deform_roi_pool: roi must have positive area");
  }
  if (offsets.shape() != std::vector<std::size_t>{2, bins, bins}) {
    ThrowInvalid("deform_roi_pool: offsets must have shape (2, bins, bins)");
  }
  const std::size_t channels = features.dim(0);
  const double bin_h = roi.height() / static_cast<double>(bins);
  const double bin_w = roi.width() / static_cast<double>(bins);
  constexpr std::size_t kSubGrid = 2;

  Tensor out({channels, bins, bins});
  for (std::size_t by = 0; by < bins; ++by) {
    for (std::size_t bx = 0; bx < bins; ++bx) {
      const double top = roi.y1 + by * bin_h + offsets.at(0, by, bx);
      const double left = roi.x1 + bx * bin_w + offsets.at(1, by, bx);
      for (std::size_t c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (std::size_t sy = 0; sy < kSubGrid; ++sy) {
          const double y = top + (sy + 0.5) * bin_h / kSubGrid;
          for (std::size_t sx = 0; sx < kSubGrid; ++sx) {
            const double x = left + (sx + 0.5) * bin_w / kSubGrid;
            acc += SampleChannel(features, c, x, y);
          }
        }
        out.at(c, by, bx) = acc / (kSubGrid * kSubGrid);
      }
    }
  }
  return out;
}

}  // namespace uwdet
