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

#ifndef UWDET_COCO_H_
#define UWDET_COCO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uwdet/geometry.h"
#include "uwdet/suppression.h"

namespace uwdet {

struct ImageInfo {
  std::int64_t id = 0;
  int width = 0;
  int height = 0;
  std::string file_name;
};

struct Annotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  int category_id = 0;
  Box box;  // converted from COCO [x, y, w, h]
  bool iscrowd = false;
};

struct Category {
  int id = 0;
  std::string name;
};

// COCO-style detection dataset (images, box annotations, categories).
struct Dataset {
  std::vector<ImageInfo> images;
  std::vector<Annotation> annotations;
  std::vector<Category> categories;

  const ImageInfo* FindImage(std::int64_t id) const;
};

// The four target classes of the underwater benchmark, ids 1..4.
std::vector<Category> UnderwaterCategories();

// Parsing failures throw uwdet::Error with kParse (malformed JSON),
// kSchema (missing or mistyped keys) or kIntegrity (duplicate or dangling
// ids, negative box sizes). Unknown keys are ignored.
Dataset ParseCoco(std::string_view json_text);
Dataset CocoFromJson(const nlohmann::json& doc);
// Adds kIo for unreadable files.
Dataset LoadCoco(const std::filesystem::path& path);

nlohmann::json ToJson(const Dataset& dataset);
void SaveCoco(const Dataset& dataset, const std::filesystem::path& path);

// One record of a COCO results file:
//   {"image_id", "category_id", "bbox": [x, y, w, h], "score"}.
struct ResultRecord {
  std::int64_t image_id = 0;
  Detection detection;  // class_id holds category_id
};

std::vector<ResultRecord> ParseResults(std::string_view json_text);
std::vector<ResultRecord> ResultsFromJson(const nlohmann::json& doc);
std::vector<ResultRecord> LoadResults(const std::filesystem::path& path);

// Throws kIntegrity if a record names an image missing from the dataset.
void CheckResultsAgainst(const std::vector<ResultRecord>& results,
                         const Dataset& dataset);

nlohmann::json ToJson(const std::vector<ResultRecord>& results);
void SaveResults(const std::vector<ResultRecord>& results,
                 const std::filesystem::path& path);

// Reads a whole file; throws kIo on failure.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace uwdet

#endif  // UWDET_COCO_H_
