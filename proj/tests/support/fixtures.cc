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

#include "fixtures.h"

#include <atomic>
#include <fstream>
#include <functional>
#include <sstream>

#include <unistd.h>

#include "oracles.h"

#ifndef UWDET_TEST_DATA_DIR
#error "UWDET_TEST_DATA_DIR must be defined"
#endif

namespace uwdet::testing {

namespace fs = std::filesystem;

fs::path DataPath(const std::string& name) {
  return fs::path(UWDET_TEST_DATA_DIR) / name;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  Rng rng(static_cast<std::uint64_t>(
      std::hash<std::string>{}(tag) ^ static_cast<std::uint64_t>(::getpid())));
  path_ = fs::temp_directory_path() /
          ("uwdet_" + tag + "_" + std::to_string(rng.Index(1u << 30)) + "_" +
           std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Dataset TenToOneDataset() {
  Dataset ds;
  ds.categories = {{1, "common"}, {2, "rare"}};
  for (int i = 0; i < 11; ++i) {
    ds.images.push_back({i + 1, 100, 100, "img" + std::to_string(i) + ".png"});
    ds.annotations.push_back(
        {i + 1, i + 1, i < 10 ? 1 : 2, Box{10, 10, 50, 50}, false});
  }
  return ds;
}

EvalFixture RandomEvalFixture(Rng& rng) {
  EvalFixture f;
  f.dataset.categories = {{1, "a"}, {2, "b"}, {3, "c"}};
  std::int64_t ann_id = 1;
  for (std::int64_t img = 1; img <= 3; ++img) {
    f.dataset.images.push_back({img, 200, 200, "f.png"});
    const std::size_t n = 1 + rng.Index(5);
    for (std::size_t k = 0; k < n; ++k) {
      const int cat = 1 + static_cast<int>(rng.Index(3));
      const Box g = RandomBox(rng, 200.0, 8.0);
      f.dataset.annotations.push_back({ann_id++, img, cat, g, false});
      // 0-2 detections near each gt, sometimes mislabelled.
      const std::size_t copies = rng.Index(3);
      for (std::size_t c = 0; c < copies; ++c) {
        const double j = 0.25 * rng.Uniform();
        Box d{g.x1 + j * g.width() * rng.Uniform(-1, 1),
              g.y1 + j * g.height() * rng.Uniform(-1, 1),
              g.x2 + j * g.width() * rng.Uniform(-1, 1),
              g.y2 + j * g.height() * rng.Uniform(-1, 1)};
        if (d.x2 <= d.x1) std::swap(d.x1, d.x2);
        if (d.y2 <= d.y1) std::swap(d.y1, d.y2);
        const int label =
            rng.Uniform() < 0.85 ? cat : 1 + static_cast<int>(rng.Index(3));
        f.results.push_back({img, {d, rng.Uniform(0.05, 1.0), label}});
      }
    }
    const std::size_t clutter = rng.Index(4);
    for (std::size_t k = 0; k < clutter; ++k) {
      f.results.push_back({img,
                           {RandomBox(rng, 200.0, 4.0), rng.Uniform(0.0, 0.6),
                            1 + static_cast<int>(rng.Index(3))}});
    }
  }
  return f;
}

Tensor PatternImage(std::size_t height, std::size_t width) {
  Tensor t({3, height, width});
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = static_cast<double>((i * 37) % 251);
  }
  return t;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace uwdet::testing
