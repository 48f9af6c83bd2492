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

#include "uwdet/coco.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "support/fixtures.h"
#include "uwdet/error.h"

namespace uwdet {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

constexpr const char* kMinimal = R"({
  "images": [{"id": 3, "width": 64, "height": 48, "file_name": "a.png"}],
  "annotations": [{"id": 1, "image_id": 3, "category_id": 2, "bbox": [10, 20, 30, 40]}],
  "categories": [{"id": 2, "name": "echinus"}]
})";

TEST(ParseCocoTest, Minimal) {
  const Dataset ds = ParseCoco(kMinimal);
  ASSERT_EQ(ds.images.size(), 1u);
  ASSERT_EQ(ds.annotations.size(), 1u);
  EXPECT_EQ(ds.annotations[0].box, (Box{10, 20, 40, 60}));
  EXPECT_FALSE(ds.annotations[0].iscrowd);
  EXPECT_EQ(ds.FindImage(3)->width, 64);
  EXPECT_EQ(ds.FindImage(4), nullptr);
}

TEST(ParseCocoTest, Errors) {
  EXPECT_EQ(CodeOf([] { ParseCoco("{"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseCoco("[]"); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] { ParseCoco(R"({"images": [], "annotations": []})"); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] { LoadCoco(testing::DataPath("dangling_image_ann.json")); }),
            ErrorCode::kIntegrity);
  EXPECT_EQ(CodeOf([] { LoadCoco(testing::DataPath("truncated_ann.json")); }),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { LoadCoco("/nonexistent/ann.json"); }), ErrorCode::kIo);

  nlohmann::json doc = nlohmann::json::parse(kMinimal);
  doc["annotations"].push_back(doc["annotations"][0]);
  EXPECT_EQ(CodeOf([&] { CocoFromJson(doc); }), ErrorCode::kIntegrity);
  doc = nlohmann::json::parse(kMinimal);
  doc["annotations"][0]["category_id"] = 9;
  EXPECT_EQ(CodeOf([&] { CocoFromJson(doc); }), ErrorCode::kIntegrity);
  doc = nlohmann::json::parse(kMinimal);
  doc["annotations"][0]["bbox"] = {1, 2, -3, 4};
  EXPECT_EQ(CodeOf([&] { CocoFromJson(doc); }), ErrorCode::kIntegrity);
  doc = nlohmann::json::parse(kMinimal);
  doc["annotations"][0]["bbox"] = "wide";
  EXPECT_EQ(CodeOf([&] { CocoFromJson(doc); }), ErrorCode::kSchema);
}

TEST(ParseCocoTest, RoundTrip) {
  testing::TempDir dir("coco");
  const Dataset ds = LoadCoco(testing::DataPath("perfect_ann.json"));
  SaveCoco(ds, dir / "out.json");
  const Dataset back = LoadCoco(dir / "out.json");
  ASSERT_EQ(back.annotations.size(), ds.annotations.size());
  for (std::size_t i = 0; i < ds.annotations.size(); ++i) {
    EXPECT_EQ(back.annotations[i].box, ds.annotations[i].box);
    EXPECT_EQ(back.annotations[i].category_id, ds.annotations[i].category_id);
  }
  EXPECT_EQ(back.categories.size(), 4u);
  EXPECT_EQ(back.categories[3].name, "starfish");
}

TEST(UnderwaterCategoriesTest, FourClasses) {
  const auto cats = UnderwaterCategories();
  ASSERT_EQ(cats.size(), 4u);
  EXPECT_EQ(cats[0].name, "holothurian");
  EXPECT_EQ(cats[3].id, 4);
}

TEST(ResultsTest, ParseAndRoundTrip) {
  const auto results = LoadResults(testing::DataPath("perfect_dets.json"));
  ASSERT_EQ(results.size(), 5u);
  EXPECT_EQ(results[0].detection.box, (Box{10, 20, 70, 60}));
  EXPECT_EQ(results[0].detection.score, 0.95);
  testing::TempDir dir("results");
  SaveResults(results, dir / "r.json");
  const auto back = LoadResults(dir / "r.json");
  ASSERT_EQ(back.size(), results.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].image_id, results[i].image_id);
    EXPECT_EQ(back[i].detection, results[i].detection);
  }
}

TEST(ResultsTest, Errors) {
  EXPECT_EQ(CodeOf([] { ParseResults("{}"); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] { ParseResults(R"([{"image_id": 1}])"); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] {
              ParseResults(R"([{"image_id": 1, "category_id": 1, "bbox": [0,0,1,1], "score": 1.5}])");
            }),
            ErrorCode::kIntegrity);
  const Dataset ds = ParseCoco(kMinimal);
  const auto stray = ParseResults(
      R"([{"image_id": 8, "category_id": 2, "bbox": [0,0,1,1], "score": 0.5}])");
  EXPECT_EQ(CodeOf([&] { CheckResultsAgainst(stray, ds); }), ErrorCode::kIntegrity);
}

}  // namespace
}  // namespace uwdet
