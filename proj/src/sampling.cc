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

#include "uwdet/sampling.h"

#include <algorithm>
#include <unordered_map>

#include "uwdet/error.h"
#include "uwdet/random.h"

namespace uwdet {

ClassHistogram CountInstances(const Dataset& dataset) {
  ClassHistogram hist;
  for (const Category& c : dataset.categories) hist[c.id] = 0;
  for (const Annotation& a : dataset.annotations) ++hist[a.category_id];
  return hist;
}

std::vector<double> InstanceBalancedWeights(const Dataset& dataset) {
  const ClassHistogram hist = CountInstances(dataset);
  std::unordered_map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    index[dataset.images[i].id] = i;
  }
  std::vector<double> weights(dataset.images.size(), 0.0);
  for (const Annotation& a : dataset.annotations) {
    auto it = index.find(a.image_id);
    if (it == index.end()) continue;
    weights[it->second] += 1.0 / static_cast<double>(hist.at(a.category_id));
  }
  return weights;
}

std::vector<std::size_t> InstanceBalancedSample(const Dataset& dataset,
                                                std::size_t n,
                                                std::uint64_t seed) {
  if (dataset.images.empty()) ThrowInvalid("sample: dataset has no images");
  const std::vector<double> weights = InstanceBalancedWeights(dataset);
  std::vector<double> cumulative(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cumulative[i] = total;
  }
  if (!(total > 0.0)) return RandomSample(dataset, n, seed);

  Rng rng(seed);
  std::vector<std::size_t> out(n);
  for (std::size_t& pick : out) {
    const double u = rng.Uniform() * total;
    // First image whose cumulative weight exceeds u; zero-weight images are
    // never selected.
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    pick = std::min<std::size_t>(it - cumulative.begin(), weights.size() - 1);
  }
  return out;
}

std::vector<std::size_t> RandomSample(const Dataset& dataset, std::size_t n,
                                      std::uint64_t seed) {
  if (dataset.images.empty()) ThrowInvalid("sample: dataset has no images");
  Rng rng(seed);
  std::vector<std::size_t> out(n);
  for (std::size_t& pick : out) pick = rng.Index(dataset.images.size());
  return out;
}

}  // namespace uwdet
