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

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "uwdet/error.h"

namespace uwdet {

using nlohmann::json;

namespace {

[[noreturn]] void SchemaError(const std::string& message) {
  throw Error(ErrorCode::kSchema, message);
}

[[noreturn]] void IntegrityError(const std::string& message) {
  throw Error(ErrorCode::kIntegrity, message);
}

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) SchemaError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    SchemaError(where + ": missing key \"" + key + "\"");
  }
  return *it;
}

std::int64_t IntField(const json& obj, const char* key,
                      const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number_integer()) {
    SchemaError(where + ": \"" + key + "\" must be an integer");
  }
  return v.get<std::int64_t>();
}

double NumberField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_number()) SchemaError(where + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

std::string StringField(const json& obj, const char* key,
                        const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_string()) SchemaError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

const json& ArrayField(const json& obj, const char* key,
                       const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_array()) SchemaError(where + ": \"" + key + "\" must be an array");
  return v;
}

// [x, y, w, h] with w, h >= 0.
Box ParseBbox(const json& obj, const std::string& where) {
  const json& arr = ArrayField(obj, "bbox", where);
  if (arr.size() != 4) SchemaError(where + ": bbox must have 4 numbers");
  double v[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!arr[i].is_number()) SchemaError(where + ": bbox must be numeric");
    v[i] = arr[i].get<double>();
  }
  if (v[2] < 0.0 || v[3] < 0.0) {
    IntegrityError(where + ": bbox width and height must be non-negative");
  }
  return Box::FromXywh(v[0], v[1], v[2], v[3]);
}

json BboxJson(const Box& b) {
  return json::array({b.x1, b.y1, b.width(), b.height()});
}

json ParseText(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

const ImageInfo* Dataset::FindImage(std::int64_t id) const {
  for (const ImageInfo& img : images) {
    if (img.id == id) return &img;
  }
  return nullptr;
}

std::vector<Category> UnderwaterCategories() {
  return {{1, "holothurian"}, {2, "echinus"}, {3, "scallop"}, {4, "starfish"}};
}

Dataset CocoFromJson(const json& doc) {
  if (!doc.is_object()) SchemaError("annotation file: top level must be an object");
  Dataset ds;
  std::set<std::int64_t> image_ids;
  for (const json& j : ArrayField(doc, "images", "annotation file")) {
    ImageInfo img;
    img.id = IntField(j, "id", "image");
    const std::string where = "image " + std::to_string(img.id);
    img.width = static_cast<int>(IntField(j, "width", where));
    img.height = static_cast<int>(IntField(j, "height", where));
    if (j.contains("file_name")) img.file_name = StringField(j, "file_name", where);
    if (img.width < 0 || img.height < 0) {
      IntegrityError(where + ": negative image size");
    }
    if (!image_ids.insert(img.id).second) {
      IntegrityError("duplicate image id " + std::to_string(img.id));
    }
    ds.images.push_back(std::move(img));
  }

  std::set<int> category_ids;
  for (const json& j : ArrayField(doc, "categories", "annotation file")) {
    Category cat;
    cat.id = static_cast<int>(IntField(j, "id", "category"));
    cat.name = StringField(j, "name", "category " + std::to_string(cat.id));
    if (!category_ids.insert(cat.id).second) {
      IntegrityError("duplicate category id " + std::to_string(cat.id));
    }
    ds.categories.push_back(std::move(cat));
  }

  std::set<std::int64_t> annotation_ids;
  for (const json& j : ArrayField(doc, "annotations", "annotation file")) {
    Annotation ann;
    ann.id = IntField(j, "id", "annotation");
    const std::string where = "annotation " + std::to_string(ann.id);
    ann.image_id = IntField(j, "image_id", where);
    ann.category_id = static_cast<int>(IntField(j, "category_id", where));
    ann.box = ParseBbox(j, where);
    if (j.contains("iscrowd")) {
      const json& crowd = j["iscrowd"];
      if (crowd.is_boolean()) {
        ann.iscrowd = crowd.get<bool>();
      } else if (crowd.is_number_integer()) {
        ann.iscrowd = crowd.get<std::int64_t>() != 0;
      } else {
        SchemaError(where + ": iscrowd must be 0/1 or a boolean");
      }
    }
    if (!annotation_ids.insert(ann.id).second) {
      IntegrityError("duplicate annotation id " + std::to_string(ann.id));
    }
    if (!image_ids.count(ann.image_id)) {
      IntegrityError(where + " references unknown image id " +
                     std::to_string(ann.image_id));
    }
    if (!category_ids.count(ann.category_id)) {
      IntegrityError(where + " references unknown category id " +
                     std::to_string(ann.category_id));
    }
    ds.annotations.push_back(ann);
  }
  return ds;
}

Dataset ParseCoco(std::string_view json_text) {
  return CocoFromJson(ParseText(json_text));
}

Dataset LoadCoco(const std::filesystem::path& path) {
  try {
    return ParseCoco(ReadFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

json ToJson(const Dataset& dataset) {
  json images = json::array();
  for (const ImageInfo& img : dataset.images) {
    images.push_back({{"id", img.id},
                      {"width", img.width},
                      {"height", img.height},
                      {"file_name", img.file_name}});
  }
  json annotations = json::array();
  for (const Annotation& ann : dataset.annotations) {
    annotations.push_back({{"id", ann.id},
                           {"image_id", ann.image_id},
                           {"category_id", ann.category_id},
                           {"bbox", BboxJson(ann.box)},
                           {"area", Area(ann.box)},
                           {"iscrowd", ann.iscrowd ? 1 : 0}});
  }
  json categories = json::array();
  for (const Category& cat : dataset.categories) {
    categories.push_back({{"id", cat.id}, {"name", cat.name}});
  }
  return {{"images", images},
          {"annotations", annotations},
          {"categories", categories}};
}

void SaveCoco(const Dataset& dataset, const std::filesystem::path& path) {
  WriteFile(path, ToJson(dataset).dump(2) + "\n");
}

std::vector<ResultRecord> ResultsFromJson(const json& doc) {
  if (!doc.is_array()) SchemaError("results file: top level must be an array");
  std::vector<ResultRecord> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& j = doc[i];
    const std::string where = "result " + std::to_string(i);
    ResultRecord r;
    r.image_id = IntField(j, "image_id", where);
    r.detection.class_id = static_cast<int>(IntField(j, "category_id", where));
    r.detection.box = ParseBbox(j, where);
    r.detection.score = NumberField(j, "score", where);
    if (!(r.detection.score >= 0.0 && r.detection.score <= 1.0)) {
      IntegrityError(where + ": score must lie in [0, 1]");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<ResultRecord> ParseResults(std::string_view json_text) {
  return ResultsFromJson(ParseText(json_text));
}

std::vector<ResultRecord> LoadResults(const std::filesystem::path& path) {
  try {
    return ParseResults(ReadFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void CheckResultsAgainst(const std::vector<ResultRecord>& results,
                         const Dataset& dataset) {
  std::set<std::int64_t> ids;
  for (const ImageInfo& img : dataset.images) ids.insert(img.id);
  for (const ResultRecord& r : results) {
    if (!ids.count(r.image_id)) {
      IntegrityError("result references unknown image id " +
                     std::to_string(r.image_id));
    }
  }
}

json ToJson(const std::vector<ResultRecord>& results) {
  json out = json::array();
  for (const ResultRecord& r : results) {
    out.push_back({{"image_id", r.image_id},
                   {"category_id", r.detection.class_id},
                   {"bbox", BboxJson(r.detection.box)},
                   {"score", r.detection.score}});
  }
  return out;
}

void SaveResults(const std::vector<ResultRecord>& results,
                 const std::filesystem::path& path) {
  WriteFile(path, ToJson(results).dump(2) + "\n");
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace uwdet
