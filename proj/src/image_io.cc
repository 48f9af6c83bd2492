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

#include "uwdet/image_io.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "uwdet/coco.h"
#include "uwdet/error.h"

namespace uwdet {
namespace {

[[noreturn]] void ParseFailure(const std::filesystem::path& path,
                               const std::string& why) {
  throw Error(ErrorCode::kParse, path.string() + ": " + why);
}

std::uint8_t ToByte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

// Interleaved HWC bytes -> planar CHW tensor.
Tensor FromInterleaved(const std::vector<std::uint8_t>& bytes,
                       std::size_t channels, std::size_t height,
                       std::size_t width) {
  Tensor t({channels, height, width});
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        t.at(c, y, x) = bytes[(y * width + x) * channels + c];
      }
    }
  }
  return t;
}

std::vector<std::uint8_t> ToInterleaved(const Tensor& image) {
  const std::size_t channels = image.dim(0);
  const std::size_t height = image.dim(1);
  const std::size_t width = image.dim(2);
  std::vector<std::uint8_t> bytes(channels * height * width);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < channels; ++c) {
        bytes[(y * width + x) * channels + c] = ToByte(image.at(c, y, x));
      }
    }
  }
  return bytes;
}

// Netpbm header token, skipping whitespace and comments.
bool NextToken(const std::string& data, std::size_t& pos, std::string& token) {
  while (pos < data.size()) {
    if (data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  token.clear();
  while (pos < data.size() &&
         !std::isspace(static_cast<unsigned char>(data[pos]))) {
    token += data[pos++];
  }
  return !token.empty();
}

Tensor ReadNetpbm(const std::filesystem::path& path, const std::string& data) {
  std::size_t pos = 0;
  std::string magic, w, h, maxval;
  if (!NextToken(data, pos, magic) || !NextToken(data, pos, w) ||
      !NextToken(data, pos, h) || !NextToken(data, pos, maxval)) {
    ParseFailure(path, "truncated netpbm header");
  }
  const std::size_t channels = magic == "P6" ? 3 : 1;
  std::size_t width = 0, height = 0;
  try {
    width = std::stoul(w);
    height = std::stoul(h);
    if (std::stoul(maxval) != 255) ParseFailure(path, "only maxval 255 is supported");
  } catch (const std::logic_error&) {
    ParseFailure(path, "bad netpbm header");
  }
  ++pos;  // single whitespace after maxval
  const std::size_t need = channels * width * height;
  if (data.size() < pos + need) ParseFailure(path, "truncated pixel data");
  std::vector<std::uint8_t> bytes(data.begin() + pos, data.begin() + pos + need);
  return FromInterleaved(bytes, channels, height, width);
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

Tensor ReadPng(const std::filesystem::path& path) {
  File file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    ParseFailure(path, "libpng initialisation failed");
  }
  std::vector<std::uint8_t> bytes;
  std::size_t width = 0, height = 0, channels = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    ParseFailure(path, "corrupt PNG data");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  png_set_strip_16(png);
  png_set_packing(png);
  png_set_expand(png);
  png_read_update_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  channels = png_get_channels(png, info);
  bytes.resize(width * height * channels);
  std::vector<png_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) {
    rows[y] = bytes.data() + y * width * channels;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return FromInterleaved(bytes, channels, height, width);
}

void WritePng(const std::filesystem::path& path, const Tensor& image) {
  const std::size_t channels = image.dim(0);
  int color_type = 0;
  switch (channels) {
    case 1: color_type = PNG_COLOR_TYPE_GRAY; break;
    case 3: color_type = PNG_COLOR_TYPE_RGB; break;
    case 4: color_type = PNG_COLOR_TYPE_RGBA; break;
    default: ThrowInvalid("write png: unsupported channel count");
  }
  File file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "libpng initialisation failed");
  }
  std::vector<std::uint8_t> bytes = ToInterleaved(image);
  const std::size_t height = image.dim(1);
  const std::size_t width = image.dim(2);
  std::vector<png_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) {
    rows[y] = bytes.data() + y * width * channels;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::string Lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Tensor ReadImage(const std::filesystem::path& path) {
  const std::string data = ReadFile(path);
  static constexpr unsigned char kPngMagic[] = {0x89, 'P', 'N', 'G'};
  if (data.size() >= 4 && std::equal(kPngMagic, kPngMagic + 4, data.begin(),
                                     [](unsigned char a, char b) {
                                       return a == static_cast<unsigned char>(b);
                                     })) {
    return ReadPng(path);
  }
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '6')) {
    return ReadNetpbm(path, data);
  }
  ParseFailure(path, "unsupported image format (expected PNG, P5 or P6)");
}

void WriteImage(const std::filesystem::path& path, const Tensor& image) {
  RequireRank(image, 3, "write_image");
  const std::string ext = Lowercase(path.extension().string());
  if (ext == ".png") {
    WritePng(path, image);
    return;
  }
  if (ext != ".ppm" && ext != ".pgm") {
    ThrowInvalid("write_image: unsupported extension '" + ext + "'");
  }
  const std::size_t channels = image.dim(0);
  if (channels != 1 && channels != 3) {
    ThrowInvalid("write_image: netpbm output needs 1 or 3 channels");
  }
  std::string out = (channels == 3 ? "P6\n" : "P5\n") +
                    std::to_string(image.dim(2)) + " " +
                    std::to_string(image.dim(1)) + "\n255\n";
  const std::vector<std::uint8_t> bytes = ToInterleaved(image);
  out.append(bytes.begin(), bytes.end());
  WriteFile(path, out);
}

}  // namespace uwdet
