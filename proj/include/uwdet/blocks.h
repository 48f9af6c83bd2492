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

#ifndef UWDET_BLOCKS_H_
#define UWDET_BLOCKS_H_

#include <cstddef>
#include <vector>

#include "uwdet/tensor.h"

namespace uwdet {

// Global context block parameters for C channels and bottleneck width
// C / ratio.
//   key_weight (C), key_bias          1x1 conv to one attention logit
//   reduce_weight (C/r, C), reduce_bias (C/r)
//   norm_gamma, norm_beta (C/r)        layer norm over the bottleneck
//   expand_weight (C, C/r), expand_bias (C)
struct GcbParams {
  std::vector<double> key_weight;
  double key_bias = 0.0;
  Tensor reduce_weight;
  std::vector<double> reduce_bias;
  std::vector<double> norm_gamma;
  std::vector<double> norm_beta;
  Tensor expand_weight;
  std::vector<double> expand_bias;
  double norm_epsilon = 1e-5;

  std::size_t channels() const { return key_weight.size(); }
  std::size_t bottleneck() const { return reduce_bias.size(); }
};

inline constexpr std::size_t kDefaultGcbRatio = 16;

// Zero-initialised parameters with unit layer-norm scale. The bottleneck
// width is max(1, channels / ratio).
GcbParams MakeGcbParams(std::size_t channels,
                        std::size_t ratio = kDefaultGcbRatio);

void Validate(const GcbParams& p);

// Softmax over the H*W key logits.
std::vector<double> GcbAttention(const Tensor& x, const GcbParams& p);

// Attention-weighted sum of the feature vectors at every position (C).
std::vector<double> GlobalContextPool(const Tensor& x, const GcbParams& p);

// x + broadcast(transform(GlobalContextPool(x))). Output shape equals input.
Tensor GlobalContextBlock(const Tensor& x, const GcbParams& p);

// Sinusoidal encoding of row-major flattened positions p = y*w + x:
//   PE[2i][p] = sin(p / 10000^(2i/c)),  PE[2i+1][p] = cos(p / 10000^(2i/c)).
// Returns (c, h, w). c must be even.
Tensor PositionalEncoding(std::size_t h, std::size_t w, std::size_t c);

// Square C x C projections for single-head attention.
struct AttentionParams {
  Tensor query;
  Tensor key;
  Tensor value;

  std::size_t channels() const { return query.rank() ? query.dim(0) : 0; }
};

AttentionParams IdentityAttentionParams(std::size_t channels);

void Validate(const AttentionParams& p);

struct AttentionOutput {
  Tensor output;   // (C, N)
  Tensor weights;  // (N, N); row n holds the softmax over key positions
};

// Single-head scaled dot-product self attention over x (C, N):
//   weights[n][m] = softmax_m(q_n . k_m / sqrt(C)),  out[:, n] = sum_m
//   weights[n][m] v_m.
AttentionOutput SingleHeadAttention(const Tensor& x, const AttentionParams& p);

// Adds the positional encoding to a (C, H, W) map, attends over the H*W
// positions and reshapes back to (C, H, W).
Tensor AttentionPlugin(const Tensor& x, const AttentionParams& p);

}  // namespace uwdet

#endif  // UWDET_BLOCKS_H_
