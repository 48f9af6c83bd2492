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

#ifndef UWDET_GEOMETRY_H_
#define UWDET_GEOMETRY_H_

#include <cmath>

namespace uwdet {

// Axis-aligned box in pixel coordinates, corner form. Valid boxes satisfy
// x2 >= x1, y2 >= y1 with all coordinates finite. Zero-area boxes are valid.
struct Box {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  static Box FromCenter(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
  }
  // COCO [x, y, w, h].
  static Box FromXywh(double x, double y, double w, double h) {
    return {x, y, x + w, y + h};
  }

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }

  bool operator==(const Box&) const = default;
};

// Regression target for a candidate box b toward a target g:
//   dx = (gx - bx) / bw   dy = (gy - by) / bh
//   dw = log(gw / bw)     dh = log(gh / bh)
// where (x, y) is the box center and (w, h) its size.
struct Delta {
  double dx = 0.0;
  double dy = 0.0;
  double dw = 0.0;
  double dh = 0.0;

  bool operator==(const Delta&) const = default;
};

// log(62.5): keeps exp(dw) from overflowing on wild regressor outputs.
inline constexpr double kDefaultDeltaClamp = 4.135166556742356;

bool IsValid(const Box& b);

double Area(const Box& b);
double IntersectionArea(const Box& a, const Box& b);
// Smallest box containing both.
Box Enclosing(const Box& a, const Box& b);

// Intersection over union. 0 when the union is empty.
double IoU(const Box& a, const Box& b);

// IoU-family metrics with enclosing-box, center-distance and aspect-ratio
// penalties. Each falls back to IoU when its enclosing box is degenerate.
double GIoU(const Box& a, const Box& b);
double DIoU(const Box& a, const Box& b);
double CIoU(const Box& a, const Box& b);

// Throws kInvalidArgument if either box has a non-positive side.
Delta Encode(const Box& b, const Box& g);
// Inverse of Encode. dw and dh are clamped from above at max_log_scale.
Box Decode(const Box& b, const Delta& d,
           double max_log_scale = kDefaultDeltaClamp);

Box Clip(const Box& b, double width, double height);

}  // namespace uwdet

#endif  // UWDET_GEOMETRY_H_
