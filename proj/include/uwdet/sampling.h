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

#ifndef UWDET_SAMPLING_H_
#define UWDET_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "uwdet/coco.h"

namespace uwdet {

// Category id -> number of annotated instances. Every declared category is
// present, with zero when it has no instances.
using ClassHistogram = std::map<int, std::size_t>;

ClassHistogram CountInstances(const Dataset& dataset);

// Per-image weight sum over its instances of 1 / count(class). Images
// without instances weigh zero.
std::vector<double> InstanceBalancedWeights(const Dataset& dataset);

// n image indices (into dataset.images) drawn with replacement, with
// probability proportional to InstanceBalancedWeights. Falls back to uniform
// when no image has instances. Throws kInvalidArgument for an empty dataset.
std::vector<std::size_t> InstanceBalancedSample(const Dataset& dataset,
                                                std::size_t n,
                                                std::uint64_t seed);

// n image indices drawn uniformly with replacement.
std::vector<std::size_t> RandomSample(const Dataset& dataset, std::size_t n,
                                      std::uint64_t seed);

}  // namespace uwdet

#endif  // UWDET_SAMPLING_H_
