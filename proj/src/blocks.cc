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

#include "uwdet/blocks.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "uwdet/error.h"

namespace uwdet {
namespace {

// In-place numerically stable softmax.
void Softmax(std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& e : v) {
    e = std::exp(e - top);
    sum += e;
  }
  for (double& e : v) e /= sum;
}

}  // namespace

GcbParams MakeGcbParams(std::size_t channels, std::size_t ratio) {
  if (channels == 0 || ratio == 0) {
    ThrowInvalid("gcb: channels and ratio must be positive");
  }
  const std::size_t mid = std::max<std::size_t>(1, channels / ratio);
  GcbParams p;
  p.key_weight.assign(channels, 0.0);
  p.reduce_weight = Tensor({mid, channels});
  p.reduce_bias.assign(mid, 0.0);
  p.norm_gamma.assign(mid, 1.0);
  p.norm_beta.assign(mid, 0.0);
  p.expand_weight = Tensor({channels, mid});
  p.expand_bias.assign(channels, 0.0);
  return p;
}

void Validate(const GcbParams& p) {
  const std::size_t c = p.channels();
  const std::size_t mid = p.bottleneck();
  if (c == 0 || mid == 0) ThrowInvalid("gcb: empty parameters");
  if (p.reduce_weight.shape() != std::vector<std::size_t>{mid, c} ||
      p.expand_weight.shape() != std::vector<std::size_t>{c, mid} ||
      p.norm_gamma.size() != mid || p.norm_beta.size() != mid ||
      p.expand_bias.size() != c) {
    ThrowInvalid("gcb: inconsistent parameter shapes");
  }
}

std::vector<double> GcbAttention(const Tensor& x, const GcbParams& p) {
  RequireRank(x, 3, "gcb");
  Validate(p);
  if (x.dim(0) != p.channels()) ThrowInvalid("gcb: channel mismatch");
  const std::size_t channels = x.dim(0);
  const std::size_t positions = x.dim(1) * x.dim(2);
  std::vector<double> logits(positions, p.key_bias);
  for (std::size_t c = 0; c < channels; ++c) {
    const double w = p.key_weight[c];
    for (std::size_t n = 0; n < positions; ++n) {
      logits[n] += w * x[c * positions + n];
    }
  }
  Softmax(logits);
  return logits;
}

std::vector<double> GlobalContextPool(const Tensor& x, const GcbParams& p) {
  const std::vector<double> attn = GcbAttention(x, p);
  const std::size_t positions = attn.size();
  std::vector<double> context(x.dim(0), 0.0);
  for (std::size_t c = 0; c < context.size(); ++c) {
    double acc = 0.0;
    for (std::size_t n = 0; n < positions; ++n) {
      acc += attn[n] * x[c * positions + n];
    }
    context[c] = acc;
  }
  return context;
}

Tensor GlobalContextBlock(const Tensor& x, const GcbParams& p) {
  const std::vector<double> context = GlobalContextPool(x, p);
  const std::size_t channels = p.channels();
  const std::size_t mid = p.bottleneck();

  std::vector<double> hidden(mid);
  for (std::size_t k = 0; k < mid; ++k) {
    double acc = p.reduce_bias[k];
    for (std::size_t c = 0; c < channels; ++c) {
      acc += p.reduce_weight.at(k, c) * context[c];
    }
    hidden[k] = acc;
  }
  double mean = 0.0;
  for (double h : hidden) mean += h;
  mean /= static_cast<double>(mid);
  double var = 0.0;
  for (double h : hidden) var += (h - mean) * (h - mean);
  var /= static_cast<double>(mid);
  const double inv_std = 1.0 / std::sqrt(var + p.norm_epsilon);
  for (std::size_t k = 0; k < mid; ++k) {
    const double normed = (hidden[k] - mean) * inv_std;
    hidden[k] = std::max(0.0, p.norm_gamma[k] * normed + p.norm_beta[k]);
  }

  Tensor out = x;
  const std::size_t positions = x.dim(1) * x.dim(2);
  for (std::size_t c = 0; c < channels; ++c) {
    double add = p.expand_bias[c];
    for (std::size_t k = 0; k < mid; ++k) {
      add += p.expand_weight.at(c, k) * hidden[k];
    }
    for (std::size_t n = 0; n < positions; ++n) out[c * positions + n] += add;
  }
  return out;
}

Tensor PositionalEncoding(std::size_t h, std::size_t w, std::size_t c) {
  if (c == 0 || c % 2 != 0) {
    ThrowInvalid("positional_encoding: channel count must be even, got " +
                 std::to_string(c));
  }
  Tensor pe({c, h, w});
  const std::size_t positions = h * w;
  for (std::size_t i = 0; i < c / 2; ++i) {
    const double inv_freq =
        std::pow(10000.0, -static_cast<double>(2 * i) / static_cast<double>(c));
    for (std::size_t n = 0; n < positions; ++n) {
      const double angle = static_cast<double>(n) * inv_freq;
      pe[(2 * i) * positions + n] = std::sin(angle);
      pe[(2 * i + 1) * positions + n] = std::cos(angle);
    }
  }
  return pe;
}

AttentionParams IdentityAttentionParams(std::size_t channels) {
  Tensor eye({channels, channels});
  for (std::size_t i = 0; i < channels; ++i) eye.at(i, i) = 1.0;
  return {eye, eye, eye};
}

void Validate(const AttentionParams& p) {
  const std::size_t c = p.channels();
  const std::vector<std::size_t> square{c, c};
  if (c == 0 || p.query.shape() != square || p.key.shape() != square ||
      p.value.shape() != square) {
    ThrowInvalid("attention: projections must be square C x C");
  }
  for (const Tensor* t : {&p.query, &p.key, &p.value}) {
    for (double v : t->data()) {
      if (!std::isfinite(v)) ThrowInvalid("attention: non-finite projection");
    }
  }
}

namespace {

// proj (C, C) times x (C, N).
Tensor Project(const Tensor& proj, const Tensor& x) {
  const std::size_t c = proj.dim(0);
  const std::size_t n = x.dim(1);
  Tensor out({c, n});
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      const double w = proj.at(i, k);
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out.at(i, j) += w * x.at(k, j);
    }
  }
  return out;
}

}  // namespace

AttentionOutput SingleHeadAttention(const Tensor& x, const AttentionParams& p) {
  RequireRank(x, 2, "attention");
  Validate(p);
  const std::size_t c = x.dim(0);
  const std::size_t n = x.dim(1);
  if (c != p.channels()) ThrowInvalid("attention: channel mismatch");
  if (n == 0) ThrowInvalid("attention: need at least one position");

  const Tensor q = Project(p.query, x);
  const Tensor k = Project(p.key, x);
  const Tensor v = Project(p.value, x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(c));

  AttentionOutput result{Tensor({c, n}), Tensor({n, n})};
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t ch = 0; ch < c; ++ch) dot += q.at(ch, i) * k.at(ch, j);
      row[j] = dot * scale;
    }
    Softmax(row);
    for (std::size_t j = 0; j < n; ++j) result.weights.at(i, j) = row[j];
    for (std::size_t ch = 0; ch < c; ++ch) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * v.at(ch, j);
      result.output.at(ch, i) = acc;
    }
  }
  return result;
}

Tensor AttentionPlugin(const Tensor& x, const AttentionParams& p) {
  RequireRank(x, 3, "attention_plugin");
  const std::size_t c = x.dim(0);
  const std::size_t h = x.dim(1);
  const std::size_t w = x.dim(2);
  const Tensor encoded = Add(x, PositionalEncoding(h, w, c));
  return SingleHeadAttention(encoded.Reshaped({c, h * w}), p)
      .output.Reshaped({c, h, w});
}

}  // namespace uwdet
