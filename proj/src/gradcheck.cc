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

#include "uwdet/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "uwdet/deform.h"
#include "uwdet/error.h"
#include "uwdet/random.h"

namespace uwdet {

double RelativeError(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

Tensor NumericalGradient(const std::function<double()>& f, Tensor& x,
                         double step) {
  Tensor grad(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double plus = f();
    x[i] = saved - step;
    const double minus = f();
    x[i] = saved;
    grad[i] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

double MaxRelativeError(const Tensor& analytic, const Tensor& numeric) {
  if (analytic.shape() != numeric.shape()) {
    ThrowInvalid("gradcheck: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    worst = std::max(worst, RelativeError(analytic[i], numeric[i]));
  }
  return worst;
}

double GradcheckReport::worst() const {
  return std::max({bilinear, input, weight, offsets});
}

namespace {

Tensor RandomTensor(std::vector<std::size_t> shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.data()) v = rng.Normal();
  return t;
}

// Integer shift in [-1, 1] plus a fraction in [0.1, 0.9].
double SafeOffset(Rng& rng) {
  return static_cast<double>(rng.Index(3)) - 1.0 + rng.Uniform(0.1, 0.9);
}

double Dot(const Tensor& a, const Tensor& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

GradcheckReport RunDeformGradcheck(std::size_t instances, std::uint64_t seed,
                                   double step) {
  Rng rng(seed);
  GradcheckReport report;
  report.instances = instances;
  for (std::size_t n = 0; n < instances; ++n) {
    const std::size_t cin = 1 + rng.Index(2);
    const std::size_t cout = 1 + rng.Index(3);
    const std::size_t height = 4 + rng.Index(5);
    const std::size_t width = 4 + rng.Index(5);
    const std::size_t kernel = 3;
    const std::size_t pad = 1;
    const std::size_t stride = 1;

    Tensor input = RandomTensor({cin, height, width}, rng);
    Tensor weight = RandomTensor({cout, cin, kernel, kernel}, rng);
    Tensor offsets({2 * kernel * kernel, height, width});
    for (double& v : offsets.data()) v = SafeOffset(rng);
    const Tensor upstream = RandomTensor({cout, height, width}, rng);

    auto loss = [&] {
      return Dot(upstream, DeformConv2d(input, weight, offsets, stride, pad));
    };
    const DeformConvGrads g =
        DeformConv2dGrad(input, weight, offsets, upstream, stride, pad);
    report.input = std::max(
        report.input, MaxRelativeError(g.input, NumericalGradient(loss, input, step)));
    report.weight = std::max(
        report.weight,
        MaxRelativeError(g.weight, NumericalGradient(loss, weight, step)));
    report.offsets = std::max(
        report.offsets,
        MaxRelativeError(g.offsets, NumericalGradient(loss, offsets, step)));

    // A point strictly inside a bilinear cell, possibly near the border.
    const double x = static_cast<double>(rng.Index(width + 1)) - 1.0 +
                     rng.Uniform(0.1, 0.9);
    const double y = static_cast<double>(rng.Index(height + 1)) - 1.0 +
                     rng.Uniform(0.1, 0.9);
    const BilinearGrad bg = BilinearSampleGrad(input, x, y);
    for (std::size_t c = 0; c < cin; ++c) {
      const double nx = (BilinearSample(input, x + step, y)[c] -
                         BilinearSample(input, x - step, y)[c]) /
                        (2.0 * step);
      const double ny = (BilinearSample(input, x, y + step)[c] -
                         BilinearSample(input, x, y - step)[c]) /
                        (2.0 * step);
      report.bilinear = std::max({report.bilinear, RelativeError(bg.d_dx[c], nx),
                                  RelativeError(bg.d_dy[c], ny)});
    }
  }
  return report;
}

}  // namespace uwdet
