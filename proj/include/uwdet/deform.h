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

#ifndef UWDET_DEFORM_H_
#define UWDET_DEFORM_H_

#include <array>
#include <cstddef>
#include <vector>

#include "uwdet/geometry.h"
#include "uwdet/tensor.h"

namespace uwdet {

// Bilinear interpolation of every channel of a (C, H, W) map at continuous
// pixel coordinates (x, y). Neighbours outside the map contribute zero, so
// points more than one pixel outside return zeros.
std::vector<double> BilinearSample(const Tensor& map, double x, double y);

// One of the four interpolation neighbours. Out-of-bounds neighbours are
// reported with in_bounds == false and zero weight.
struct BilinearTap {
  std::ptrdiff_t y = 0;
  std::ptrdiff_t x = 0;
  double weight = 0.0;
  bool in_bounds = false;
};

struct BilinearGrad {
  std::vector<double> d_dx;  // per channel
  std::vector<double> d_dy;  // per channel
  // d value[c] / d map[c, tap.y, tap.x] = tap.weight, identical per channel.
  std::array<BilinearTap, 4> taps;
};

// Partial derivatives of BilinearSample. At integral coordinates the
// derivative of the cell to the right (below) is returned.
BilinearGrad BilinearSampleGrad(const Tensor& map, double x, double y);

// Deformable 2-D convolution.
//   input   (Cin, H, W)
//   weight  (Cout, Cin, K, K)
//   offsets (2*K*K, H', W') with H' = (H + 2*pad - K) / stride + 1.
// Channel 2*(i*K + j) holds the row offset and 2*(i*K + j) + 1 the column
// offset of kernel tap (i, j) at each output position. Tap (i, j) of output
// (oy, ox) samples the input at
//   y = oy*stride - pad + i + dy,  x = ox*stride - pad + j + dx.
struct DeformConvShape {
  std::size_t in_channels, height, width;
  std::size_t out_channels, kernel;
  std::size_t out_height, out_width;
};

DeformConvShape CheckDeformConv(const Tensor& input, const Tensor& weight,
                                const Tensor& offsets, std::size_t stride,
                                std::size_t pad);

Tensor DeformConv2d(const Tensor& input, const Tensor& weight,
                    const Tensor& offsets, std::size_t stride,
                    std::size_t pad);

struct DeformConvGrads {
  Tensor input;
  Tensor weight;
  Tensor offsets;
};

// Gradients of sum(grad_output * DeformConv2d(...)) with respect to each
// argument.
DeformConvGrads DeformConv2dGrad(const Tensor& input, const Tensor& weight,
                                 const Tensor& offsets,
                                 const Tensor& grad_output, std::size_t stride,
                                 std::size_t pad);

// Deformable RoI pooling over a (C, H, W) feature map. The RoI, given in
// feature-map pixels, is split into bins x bins cells. Cell (i, j) is shifted
// by offsets (2, bins, bins): channel 0 is the row shift, channel 1 the column
// shift, both in feature pixels. Each output cell averages bilinear samples
// at the centres of a 2x2 sub-grid of its shifted cell.
Tensor DeformRoiPool(const Tensor& features, const Box& roi, std::size_t bins,
                     const Tensor& offsets);

// Zero offsets for DeformRoiPool.
Tensor ZeroRoiOffsets(std::size_t bins);

}  // namespace uwdet

#endif  // UWDET_DEFORM_H_
