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

#ifndef UWDET_GRADCHECK_H_
#define UWDET_GRADCHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "uwdet/tensor.h"

namespace uwdet {

// |a - n| / max(|a|, |n|, floor).
double RelativeError(double analytic, double numeric, double floor = 1e-6);

// Central-difference derivative of f with respect to each entry of x:
//   (f(x + h e_i) - f(x - h e_i)) / 2h.
// x is perturbed in place and restored.
Tensor NumericalGradient(const std::function<double()>& f, Tensor& x,
                         double step);

// Largest RelativeError over matching entries.
double MaxRelativeError(const Tensor& analytic, const Tensor& numeric);

struct GradcheckReport {
  std::size_t instances = 0;
  double bilinear = 0.0;  // d/dx, d/dy of BilinearSample
  double input = 0.0;
  double weight = 0.0;
  double offsets = 0.0;

  double worst() const;
};

// Random deformable-convolution instances with up to 2 input channels, 3
// output channels and 8x8 inputs. Sampling offsets keep every tap at least
// 0.1 pixel away from integer coordinates so the finite-difference stencil
// never crosses a bilinear cell boundary.
GradcheckReport RunDeformGradcheck(std::size_t instances, std::uint64_t seed,
                                   double step = 1e-4);

}  // namespace uwdet

#endif  // UWDET_GRADCHECK_H_
