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

#include "cli.h"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uwdet/augment.h"
#include "uwdet/cascade.h"
#include "uwdet/coco.h"
#include "uwdet/error.h"
#include "uwdet/eval.h"
#include "uwdet/gradcheck.h"
#include "uwdet/image_io.h"
#include "uwdet/pyramid.h"
#include "uwdet/schedule.h"
#include "uwdet/suppression.h"

namespace uwdet::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::map<std::string, std::set<std::string>>& ConfigSchema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"eval", {"iou_min", "iou_max", "iou_step", "max_dets"}},
      {"nms",
       {"soft", "method", "iou_thr", "sigma", "score_floor", "score_thr",
        "class_agnostic"}},
      {"augment", {"chain"}},
      {"anchors", {"strides", "scales", "ratios", "width", "height"}},
      {"cascade",
       {"thresholds", "num_gts", "train_proposals_per_gt",
        "test_proposals_per_gt", "center_jitter", "size_jitter",
        "feature_noise", "bins", "image_size", "min_gt_size", "max_gt_size"}},
      {"schedule",
       {"base_lr", "warmup_iters", "warmup_start_factor", "step_epochs",
        "gamma", "step_lrs", "iters_per_epoch"}},
      {"gradcheck", {"instances", "step", "tolerance"}},
  };
  return schema;
}

// Optional JSON config. Every key must be known; values are type-checked
// when read.
class Config {
 public:
  Config() : doc_(json::object()) {}

  static Config Load(const std::string& path) {
    Config cfg;
    if (path.empty()) return cfg;
    try {
      cfg.doc_ = json::parse(ReadFile(path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParse, path + ": malformed JSON: " + e.what());
    }
    if (!cfg.doc_.is_object()) ThrowInvalid(path + ": config must be an object");
    for (const auto& [key, value] : cfg.doc_.items()) {
      if (key == "seed") continue;
      auto it = ConfigSchema().find(key);
      if (it == ConfigSchema().end()) {
        ThrowInvalid("config: unknown key \"" + key + "\"");
      }
      if (!value.is_object()) ThrowInvalid("config: \"" + key + "\" must be an object");
      for (const auto& [sub, unused] : value.items()) {
        if (!it->second.count(sub)) {
          ThrowInvalid("config: unknown key \"" + key + "." + sub + "\"");
        }
      }
    }
    return cfg;
  }

  const json* Get(const std::string& section, const std::string& key) const {
    auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    auto k = s->find(key);
    return k == s->end() ? nullptr : &*k;
  }

  const json* Seed() const {
    auto it = doc_.find("seed");
    return it == doc_.end() ? nullptr : &*it;
  }

 private:
  json doc_;
};

template <typename T>
T As(const json& v, const std::string& what) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    ThrowInvalid("config: \"" + what + "\" has the wrong type");
  }
}

// Flag if given, else config value, else the flag's default.
template <typename T>
T Pick(const CLI::Option* flag, const T& flag_value, const Config& cfg,
       const std::string& section, const std::string& key) {
  if (flag && flag->count() > 0) return flag_value;
  if (const json* v = cfg.Get(section, key)) {
    return As<T>(*v, section + "." + key);
  }
  return flag_value;
}

void Emit(const std::string& path, const std::string& content,
          std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    WriteFile(path, content);
  }
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string ann, dets, json_out;
  double iou_min = 0.5, iou_max = 0.95, iou_step = 0.05;
  std::size_t max_dets = 0;
  CLI::Option *o_min, *o_max, *o_step, *o_max_dets;
};

int RunEval(const EvalArgs& a, const Config& cfg, std::ostream& out) {
  const Dataset ds = LoadCoco(a.ann);
  const std::vector<ResultRecord> results = LoadResults(a.dets);
  EvalOptions options;
  options.iou_thresholds =
      IouThresholds(Pick(a.o_min, a.iou_min, cfg, "eval", "iou_min"),
                    Pick(a.o_max, a.iou_max, cfg, "eval", "iou_max"),
                    Pick(a.o_step, a.iou_step, cfg, "eval", "iou_step"));
  const std::size_t cap =
      Pick(a.o_max_dets, a.max_dets, cfg, "eval", "max_dets");
  if (cap > 0) options.max_detections = cap;
  const EvalResult result = EvaluateMap(results, ds, options);
  out << FormatTable(result);
  if (!a.json_out.empty()) WriteFile(a.json_out, ToJson(result).dump(2) + "\n");
  return kExitOk;
}

// ----------------------------------------------------------------- nms

struct NmsArgs {
  std::string in, out;
  bool soft = false;
  bool class_agnostic = false;
  std::string method = "gaussian";
  double iou_thr = kDetectionNmsThreshold;
  double sigma = 0.5;
  double score_floor = kDefaultScoreThreshold;
  double score_thr = 0.0;
  CLI::Option *o_soft, *o_agnostic, *o_method, *o_iou, *o_sigma, *o_floor,
      *o_score;
};

int RunNms(const NmsArgs& a, const Config& cfg, std::ostream& out) {
  const std::vector<ResultRecord> records = LoadResults(a.in);
  const bool soft = Pick(a.o_soft, a.soft, cfg, "nms", "soft");
  const bool agnostic =
      Pick(a.o_agnostic, a.class_agnostic, cfg, "nms", "class_agnostic");
  const std::string method = Pick(a.o_method, a.method, cfg, "nms", "method");
  const double iou_thr = Pick(a.o_iou, a.iou_thr, cfg, "nms", "iou_thr");
  const double score_thr = Pick(a.o_score, a.score_thr, cfg, "nms", "score_thr");
  if (method != "linear" && method != "gaussian") {
    ThrowInvalid("nms: --method must be linear or gaussian");
  }

  SoftNmsOptions opts;
  opts.iou_threshold = iou_thr;
  opts.sigma = Pick(a.o_sigma, a.sigma, cfg, "nms", "sigma");
  opts.score_floor = Pick(a.o_floor, a.score_floor, cfg, "nms", "score_floor");
  opts.method =
      method == "linear" ? SoftNmsMethod::kLinear : SoftNmsMethod::kGaussian;
  opts.class_agnostic = agnostic;

  // Images are processed independently, in ascending id order.
  std::map<std::int64_t, std::vector<Detection>> per_image;
  for (const ResultRecord& r : records) {
    per_image[r.image_id].push_back(r.detection);
  }
  std::vector<ResultRecord> kept;
  for (const auto& [image_id, dets] : per_image) {
    const std::vector<Detection> filtered = FilterByScore(dets, score_thr);
    const std::vector<Detection> survivors =
        soft ? SoftNms(filtered, opts) : Nms(filtered, iou_thr, agnostic);
    for (const Detection& d : survivors) kept.push_back({image_id, d});
  }
  Emit(a.out, ToJson(kept).dump(2) + "\n", out);
  return kExitOk;
}

// ------------------------------------------------------------- augment

struct AugmentArgs {
  std::string image, ann, out_image, out_ann;
  std::int64_t image_id = -1;
  std::vector<std::string> ops;
};

// "hflip", "vflip", "rotate90=K", "resize=WxH", "jitter=M",
// "cutout=x,y,w,h[,fill]" -> chain entry.
json ParseOpFlag(const std::string& text) {
  const auto eq = text.find('=');
  const std::string name = text.substr(0, eq);
  const std::string arg = eq == std::string::npos ? "" : text.substr(eq + 1);
  try {
    if (name == "hflip" || name == "vflip") return {{"op", name}};
    if (name == "rotate90") return {{"op", name}, {"k", std::stoi(arg)}};
    if (name == "jitter") {
      return {{"op", "bbox_jitter"}, {"magnitude", std::stod(arg)}};
    }
    if (name == "resize") {
      const auto x = arg.find('x');
      if (x == std::string::npos) ThrowInvalid("--op resize expects WxH");
      return {{"op", name},
              {"width", std::stoi(arg.substr(0, x))},
              {"height", std::stoi(arg.substr(x + 1))}};
    }
    if (name == "cutout") {
      std::vector<double> v;
      std::stringstream ss(arg);
      for (std::string part; std::getline(ss, part, ',');) {
        v.push_back(std::stod(part));
      }
      if (v.size() != 4 && v.size() != 5) {
        ThrowInvalid("--op cutout expects x,y,w,h[,fill]");
      }
      return {{"op", name},
              {"rects", json::array({json::array({v[0], v[1], v[2], v[3]})})},
              {"fill", v.size() == 5 ? v[4] : 0.0}};
    }
  } catch (const std::logic_error&) {
    ThrowInvalid("bad --op argument: " + text);
  }
  ThrowInvalid("unknown --op: " + name);
}

const ImageInfo& SelectImage(const Dataset& ds, std::int64_t image_id,
                             const fs::path& image_path) {
  if (image_id >= 0) {
    if (const ImageInfo* img = ds.FindImage(image_id)) return *img;
    throw Error(ErrorCode::kIntegrity,
                "no image with id " + std::to_string(image_id));
  }
  if (ds.images.size() == 1) return ds.images.front();
  for (const ImageInfo& img : ds.images) {
    if (fs::path(img.file_name).filename() == image_path.filename()) return img;
  }
  ThrowInvalid("cannot tell which image " + image_path.string() +
               " is; pass --image-id");
}

Sample LoadSample(const Dataset& ds, const ImageInfo& info,
                  const fs::path& image_path, std::vector<std::int64_t>* ids) {
  Tensor image = ReadImage(image_path);
  const double w = static_cast<double>(image.dim(2));
  const double h = static_cast<double>(image.dim(1));
  std::vector<Box> boxes;
  std::vector<int> labels;
  for (const Annotation& a : ds.annotations) {
    if (a.image_id != info.id) continue;
    boxes.push_back(Clip(a.box, w, h));
    labels.push_back(a.category_id);
    if (ids) ids->push_back(a.id);
  }
  return MakeSample(std::move(image), std::move(boxes), std::move(labels));
}

void CheckOpKeys(const json& op, std::initializer_list<const char*> allowed) {
  for (const auto& [key, unused] : op.items()) {
    if (key == "op") continue;
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      ThrowInvalid("augment: unknown key \"" + key + "\" for op " +
                   op["op"].get<std::string>());
    }
  }
}

int RunAugment(const AugmentArgs& a, const Config& cfg, std::uint64_t seed) {
  json chain = json::array();
  if (!a.ops.empty()) {
    for (const std::string& op : a.ops) chain.push_back(ParseOpFlag(op));
  } else if (const json* c = cfg.Get("augment", "chain")) {
    if (!c->is_array()) ThrowInvalid("config: augment.chain must be an array");
    chain = *c;
  }

  const Dataset ds = LoadCoco(a.ann);
  const ImageInfo& info = SelectImage(ds, a.image_id, a.image);
  std::vector<std::int64_t> ann_ids;
  Sample sample = LoadSample(ds, info, a.image, &ann_ids);

  for (std::size_t i = 0; i < chain.size(); ++i) {
    const json& op = chain[i];
    if (!op.is_object() || !op.contains("op") || !op["op"].is_string()) {
      ThrowInvalid("augment: chain entries need a string \"op\"");
    }
    const std::string name = op["op"].get<std::string>();
    const std::string where = "augment.chain[" + std::to_string(i) + "]";
    if (name == "hflip") {
      CheckOpKeys(op, {});
      sample = HFlip(sample);
    } else if (name == "vflip") {
      CheckOpKeys(op, {});
      sample = VFlip(sample);
    } else if (name == "rotate90") {
      CheckOpKeys(op, {"k"});
      sample = Rotate90(sample, op.contains("k") ? As<int>(op["k"], where) : 1);
    } else if (name == "resize") {
      CheckOpKeys(op, {"width", "height"});
      if (!op.contains("width") || !op.contains("height")) {
        ThrowInvalid(where + ": resize needs width and height");
      }
      const int w = As<int>(op["width"], where);
      const int h = As<int>(op["height"], where);
      if (w <= 0 || h <= 0) ThrowInvalid(where + ": size must be positive");
      sample = Resize(sample, static_cast<std::size_t>(w),
                      static_cast<std::size_t>(h));
    } else if (name == "cutout") {
      CheckOpKeys(op, {"rects", "fill"});
      std::vector<Box> rects;
      if (op.contains("rects")) {
        for (const json& r : op["rects"]) {
          const auto v = As<std::vector<double>>(r, where);
          if (v.size() != 4 || v[2] < 0.0 || v[3] < 0.0) {
            ThrowInvalid(where + ": rects are [x, y, w, h]");
          }
          rects.push_back(Box::FromXywh(v[0], v[1], v[2], v[3]));
        }
      }
      sample = Cutout(sample, rects,
                      op.contains("fill") ? As<double>(op["fill"], where) : 0.0);
    } else if (name == "bbox_jitter") {
      CheckOpKeys(op, {"magnitude"});
      const double m =
          op.contains("magnitude") ? As<double>(op["magnitude"], where) : 0.05;
      // Each jitter in a chain gets its own stream.
      sample = BBoxJitter(sample, m, seed + i);
    } else if (name == "mixup") {
      CheckOpKeys(op, {"image", "image_id", "lam"});
      if (!op.contains("image") || !op.contains("image_id")) {
        ThrowInvalid(where + ": mixup needs image and image_id");
      }
      const ImageInfo* partner = ds.FindImage(As<std::int64_t>(op["image_id"], where));
      if (!partner) {
        throw Error(ErrorCode::kIntegrity, where + ": unknown partner image id");
      }
      const Sample other = LoadSample(
          ds, *partner, As<std::string>(op["image"], where), nullptr);
      const std::size_t before = sample.boxes.size();
      sample = Mixup(sample, other,
                     op.contains("lam") ? As<double>(op["lam"], where) : 0.5);
      std::int64_t next = 0;
      for (const Annotation& ann : ds.annotations) next = std::max(next, ann.id);
      for (std::int64_t id : ann_ids) next = std::max(next, id);
      for (std::size_t k = before; k < sample.boxes.size(); ++k) {
        ann_ids.push_back(++next);
      }
    } else {
      ThrowInvalid(where + ": unknown op \"" + name + "\"");
    }
  }

  WriteImage(a.out_image, sample.image);

  Dataset out_ds;
  out_ds.categories = ds.categories;
  out_ds.images.push_back({info.id, static_cast<int>(sample.width()),
                           static_cast<int>(sample.height()),
                           fs::path(a.out_image).filename().string()});
  for (std::size_t i = 0; i < sample.boxes.size(); ++i) {
    out_ds.annotations.push_back(
        {ann_ids[i], info.id, sample.labels[i], sample.boxes[i], false});
  }
  json doc = ToJson(out_ds);
  for (std::size_t i = 0; i < sample.weights.size(); ++i) {
    doc["annotations"][i]["weight"] = sample.weights[i];
  }
  WriteFile(a.out_ann, doc.dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------------- anchors

struct AnchorArgs {
  int width = 0, height = 0;
  std::string out;
  std::vector<int> strides{4, 8, 16, 32};
  std::vector<double> scales{8.0};
  std::vector<double> ratios{0.5, 1.0, 2.0};
  CLI::Option *o_width, *o_height, *o_strides, *o_scales, *o_ratios;
};

int RunAnchors(const AnchorArgs& a, const Config& cfg, std::ostream& out) {
  const int width = Pick(a.o_width, a.width, cfg, "anchors", "width");
  const int height = Pick(a.o_height, a.height, cfg, "anchors", "height");
  PyramidSpec spec;
  spec.levels.clear();
  const auto strides = Pick(a.o_strides, a.strides, cfg, "anchors", "strides");
  for (std::size_t i = 0; i < strides.size(); ++i) {
    // Power-of-two strides are named after their stage (4 -> C2, 32 -> C5);
    // anything else falls back to position.
    const int s = strides[i];
    const bool pow2 = s > 0 && std::has_single_bit(static_cast<unsigned>(s));
    const int stage = pow2 ? std::countr_zero(static_cast<unsigned>(s)) : static_cast<int>(i) + 2;
    spec.levels.push_back({"C" + std::to_string(stage), s});
  }
  spec.scales = Pick(a.o_scales, a.scales, cfg, "anchors", "scales");
  spec.ratios = Pick(a.o_ratios, a.ratios, cfg, "anchors", "ratios");
  const auto anchors = GenerateAnchors(spec, width, height);
  std::string csv = "level,x1,y1,x2,y2\n";
  for (std::size_t l = 0; l < anchors.size(); ++l) {
    for (const Box& b : anchors[l]) {
      csv += fmt::format("{},{},{},{},{}\n", spec.levels[l].name, b.x1, b.y1,
                         b.x2, b.y2);
    }
  }
  Emit(a.out, csv, out);
  return kExitOk;
}

// ---------------------------------------------------- simulate-cascade

struct CascadeArgs {
  std::string out;
  std::vector<double> thresholds{0.5, 0.6, 0.7};
  CascadeSimulationOptions sim;
  CLI::Option *o_thr, *o_gts, *o_bins, *o_center, *o_size, *o_noise;
};

int RunSimulateCascade(const CascadeArgs& a, const Config& cfg,
                       std::uint64_t seed, std::ostream& out,
                       std::ostream& err) {
  CascadeConfig cc;
  cc.thresholds = Pick(a.o_thr, a.thresholds, cfg, "cascade", "thresholds");
  CascadeSimulationOptions o = a.sim;
  o.num_gts = Pick(a.o_gts, o.num_gts, cfg, "cascade", "num_gts");
  o.histogram_bins = Pick(a.o_bins, o.histogram_bins, cfg, "cascade", "bins");
  o.center_jitter =
      Pick(a.o_center, o.center_jitter, cfg, "cascade", "center_jitter");
  o.size_jitter = Pick(a.o_size, o.size_jitter, cfg, "cascade", "size_jitter");
  o.feature_noise =
      Pick(a.o_noise, o.feature_noise, cfg, "cascade", "feature_noise");
  o.train_proposals_per_gt = Pick<std::size_t>(
      nullptr, o.train_proposals_per_gt, cfg, "cascade", "train_proposals_per_gt");
  o.test_proposals_per_gt = Pick<std::size_t>(
      nullptr, o.test_proposals_per_gt, cfg, "cascade", "test_proposals_per_gt");
  o.image_size = Pick<double>(nullptr, o.image_size, cfg, "cascade", "image_size");
  o.min_gt_size = Pick<double>(nullptr, o.min_gt_size, cfg, "cascade", "min_gt_size");
  o.max_gt_size = Pick<double>(nullptr, o.max_gt_size, cfg, "cascade", "max_gt_size");

  const CascadeSimulation sim = SimulateCascade(o, cc, seed);
  std::string csv = "stage,bin_lo,bin_hi,count\n";
  for (std::size_t s = 0; s < sim.histograms.size(); ++s) {
    const Histogram& h = sim.histograms[s];
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      csv += fmt::format("{},{},{},{}\n", s, h.edges[b], h.edges[b + 1],
                         h.counts[b]);
    }
  }
  Emit(a.out, csv, out);
  for (std::size_t s = 0; s < sim.fraction_high_quality.size(); ++s) {
    err << fmt::format("stage {}: fraction IoU >= {:.2f}: {:.4f}\n", s,
                       cc.thresholds.back(), sim.fraction_high_quality[s]);
  }
  return kExitOk;
}

// -------------------------------------------------------------- lr-dump

struct LrArgs {
  std::int64_t iters = 0;
  std::int64_t every = 1;
  std::string out;
  ScheduleConfig sc;
  CLI::Option *o_ipe, *o_base, *o_warm;
};

int RunLrDump(const LrArgs& a, const Config& cfg, std::ostream& out) {
  ScheduleConfig sc = a.sc;
  sc.iters_per_epoch =
      Pick(a.o_ipe, sc.iters_per_epoch, cfg, "schedule", "iters_per_epoch");
  sc.base_lr = Pick(a.o_base, sc.base_lr, cfg, "schedule", "base_lr");
  sc.warmup_iters = Pick(a.o_warm, sc.warmup_iters, cfg, "schedule", "warmup_iters");
  sc.warmup_start_factor = Pick<double>(nullptr, sc.warmup_start_factor, cfg,
                                        "schedule", "warmup_start_factor");
  sc.step_epochs =
      Pick<std::vector<int>>(nullptr, sc.step_epochs, cfg, "schedule", "step_epochs");
  sc.gamma = Pick<double>(nullptr, sc.gamma, cfg, "schedule", "gamma");
  sc.step_lrs =
      Pick<std::vector<double>>(nullptr, sc.step_lrs, cfg, "schedule", "step_lrs");
  Validate(sc);
  if (a.iters < 0 || a.every < 1) ThrowInvalid("lr-dump: bad --iters/--every");
  std::string csv = "iter,lr\n";
  for (std::int64_t it = 0; it < a.iters; it += a.every) {
    csv += fmt::format("{},{}\n", it, LrAt(it, sc));
  }
  Emit(a.out, csv, out);
  return kExitOk;
}

// ------------------------------------------------------------ gradcheck

struct GradArgs {
  std::size_t instances = 20;
  double step = 1e-4;
  double tolerance = 1e-4;
  CLI::Option *o_inst, *o_step, *o_tol;
};

int RunGradcheck(const GradArgs& a, const Config& cfg, std::uint64_t seed,
                 std::ostream& out) {
  const std::size_t instances =
      Pick(a.o_inst, a.instances, cfg, "gradcheck", "instances");
  const double step = Pick(a.o_step, a.step, cfg, "gradcheck", "step");
  const double tol = Pick(a.o_tol, a.tolerance, cfg, "gradcheck", "tolerance");
  const GradcheckReport r = RunDeformGradcheck(instances, seed, step);
  out << fmt::format("instances: {}\n", r.instances);
  out << fmt::format("bilinear_sample  max_rel_err {:.3e}\n", r.bilinear);
  out << fmt::format("deform_conv2d/input    max_rel_err {:.3e}\n", r.input);
  out << fmt::format("deform_conv2d/weight   max_rel_err {:.3e}\n", r.weight);
  out << fmt::format("deform_conv2d/offsets  max_rel_err {:.3e}\n", r.offsets);
  const bool ok = r.worst() < tol;
  out << fmt::format("{} (tolerance {:.1e})\n", ok ? "PASS" : "FAIL", tol);
  return ok ? kExitOk : kExitValidation;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"uwdet: detection post-processing, evaluation and kernel checks", "uwdet"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON config file");
  CLI::Option* o_seed = app.add_option("--seed", seed, "Seed for all randomness");

  EvalArgs ea;
  CLI::App* eval = app.add_subcommand("eval", "mAP over a COCO annotation file");
  eval->add_option("--ann", ea.ann, "COCO annotation JSON")->required();
  eval->add_option("--dets", ea.dets, "COCO results JSON")->required();
  ea.o_min = eval->add_option("--iou-min", ea.iou_min);
  ea.o_max = eval->add_option("--iou-max", ea.iou_max);
  ea.o_step = eval->add_option("--iou-step", ea.iou_step);
  ea.o_max_dets = eval->add_option("--max-dets", ea.max_dets, "0 = no cap");
  eval->add_option("--json", ea.json_out, "Write the result as JSON");

  NmsArgs na;
  CLI::App* nms = app.add_subcommand("nms", "Hard or soft NMS over a results file");
  nms->add_option("--in", na.in, "COCO results JSON")->required();
  nms->add_option("--out", na.out, "Output results JSON (default stdout)");
  na.o_soft = nms->add_flag("--soft", na.soft, "Use soft-NMS");
  na.o_agnostic = nms->add_flag("--class-agnostic", na.class_agnostic);
  na.o_method = nms->add_option("--method", na.method, "linear or gaussian");
  na.o_iou = nms->add_option("--iou-thr", na.iou_thr);
  na.o_sigma = nms->add_option("--sigma", na.sigma);
  na.o_floor = nms->add_option("--score-floor", na.score_floor);
  na.o_score = nms->add_option("--score-thr", na.score_thr,
                               "Drop detections below this before suppression");

  AugmentArgs aa;
  CLI::App* augment = app.add_subcommand("augment", "Apply an augmentation chain");
  augment->add_option("--image", aa.image, "PNG or PPM/PGM image")->required();
  augment->add_option("--ann", aa.ann, "COCO annotation JSON")->required();
  augment->add_option("--out-image", aa.out_image)->required();
  augment->add_option("--out-ann", aa.out_ann)->required();
  augment->add_option("--image-id", aa.image_id);
  augment->add_option("--op", aa.ops,
                      "hflip | vflip | rotate90=K | resize=WxH | jitter=M | "
                      "cutout=x,y,w,h[,fill]; overrides the config chain");

  AnchorArgs an;
  CLI::App* anchors = app.add_subcommand("anchors", "Dump pyramid anchors as CSV");
  an.o_width = anchors->add_option("--width", an.width);
  an.o_height = anchors->add_option("--height", an.height);
  an.o_strides = anchors->add_option("--strides", an.strides)->delimiter(',');
  an.o_scales = anchors->add_option("--scales", an.scales)->delimiter(',');
  an.o_ratios = anchors->add_option("--ratios", an.ratios)->delimiter(',');
  anchors->add_option("--out", an.out);

  CascadeArgs ca;
  CLI::App* cascade = app.add_subcommand(
      "simulate-cascade", "Per-stage IoU histograms of a synthetic cascade");
  ca.o_thr = cascade->add_option("--thresholds", ca.thresholds)->delimiter(',');
  ca.o_gts = cascade->add_option("--num-gts", ca.sim.num_gts);
  ca.o_bins = cascade->add_option("--bins", ca.sim.histogram_bins);
  ca.o_center = cascade->add_option("--center-jitter", ca.sim.center_jitter);
  ca.o_size = cascade->add_option("--size-jitter", ca.sim.size_jitter);
  ca.o_noise = cascade->add_option("--feature-noise", ca.sim.feature_noise);
  cascade->add_option("--out", ca.out);

  LrArgs la;
  CLI::App* lr = app.add_subcommand("lr-dump", "Learning rate per iteration as CSV");
  lr->add_option("--iters", la.iters, "Number of iterations")->required();
  lr->add_option("--every", la.every, "Print every k-th iteration");
  la.o_ipe = lr->add_option("--iters-per-epoch", la.sc.iters_per_epoch);
  la.o_base = lr->add_option("--base-lr", la.sc.base_lr);
  la.o_warm = lr->add_option("--warmup-iters", la.sc.warmup_iters);
  lr->add_option("--out", la.out);

  GradArgs ga;
  CLI::App* grad = app.add_subcommand(
      "gradcheck", "Finite-difference check of the deformable kernels");
  ga.o_inst = grad->add_option("--instances", ga.instances);
  ga.o_step = grad->add_option("--step", ga.step);
  ga.o_tol = grad->add_option("--tolerance", ga.tolerance);

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                    args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    const Config cfg = Config::Load(config_path);
    if (o_seed->count() == 0) {
      if (const json* s = cfg.Seed()) seed = As<std::uint64_t>(*s, "seed");
    }
    if (eval->parsed()) return RunEval(ea, cfg, out);
    if (nms->parsed()) return RunNms(na, cfg, out);
    if (augment->parsed()) return RunAugment(aa, cfg, seed);
    if (anchors->parsed()) return RunAnchors(an, cfg, out);
    if (cascade->parsed()) return RunSimulateCascade(ca, cfg, seed, out, err);
    if (lr->parsed()) return RunLrDump(la, cfg, out);
    if (grad->parsed()) return RunGradcheck(ga, cfg, seed, out);
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitValidation : kExitIo;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace uwdet::cli
