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

#ifndef UWDET_IMAGE_IO_H_
#define UWDET_IMAGE_IO_H_

#include <filesystem>

#include "uwdet/tensor.h"

namespace uwdet {

// Reads PNG, binary PPM (P6) or PGM (P5) into a (C, H, W) tensor of 0..255
// values; the format is taken from the file contents. Throws kIo when the
// file cannot be read and kParse for unsupported or corrupt data.
Tensor ReadImage(const std::filesystem::path& path);

// Writes a (C, H, W) tensor with C in {1, 3, 4} (PPM/PGM: {1, 3}), choosing
// the format by extension (.png, .ppm, .pgm). Values are rounded and
// clamped to 0..255.
void WriteImage(const std::filesystem::path& path, const Tensor& image);

}  // namespace uwdet

#endif  // UWDET_IMAGE_IO_H_
