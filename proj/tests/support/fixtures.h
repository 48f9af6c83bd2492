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

#ifndef UWDET_TESTS_SUPPORT_FIXTURES_H_
#define UWDET_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "uwdet/coco.h"
#include "uwdet/random.h"
#include "uwdet/tensor.h"

namespace uwdet::testing {

std::filesystem::path DataPath(const std::string& name);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Images 0..9 hold one class-1 instance each, image 10 one class-2 instance.
Dataset TenToOneDataset();

struct EvalFixture {
  Dataset dataset;
  std::vector<ResultRecord> results;
};
// Three images, three classes, jittered true positives plus clutter.
// Scores are continuous so rankings carry no ties.
EvalFixture RandomEvalFixture(Rng& rng);

// (3, h, w) image with distinct integer values.
Tensor PatternImage(std::size_t height, std::size_t width);

std::string Slurp(const std::filesystem::path& path);

}  // namespace uwdet::testing

#endif  // UWDET_TESTS_SUPPORT_FIXTURES_H_
