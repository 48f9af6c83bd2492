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

#include "uwdet/geometry.h"

#include <algorithm>
#include <numbers>

#include "uwdet/error.h"

namespace uwdet {

bool IsValid(const Box& b) {
  return std::isfinite(b.x1) && std::isfinite(b.y1) && std::isfinite(b.x2) &&
         std::isfinite(b.y2) && b.x2 >= b.x1 && b.y2 >= b.y1;
}

double Area(const Box& b) { return b.width() * b.height(); }

double IntersectionArea(const Box& a, const Box& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

Box Enclosing(const Box& a, const Box& b) {
  return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2),
          std::max(a.y2, b.y2)};
}

double IoU(const Box& a, const Box& b) {
  const double inter = IntersectionArea(a, b);
  const double uni = Area(a) + Area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double GIoU(const Box& a, const Box& b) {
  const double inter = IntersectionArea(a, b);
  const double uni = Area(a) + Area(b) - inter;
  const double iou = uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
  const double hull = Area(Enclosing(a, b));
  if (hull <= 0.0) return iou;
  // max() keeps the penalty non-negative under rounding.
  return iou - std::max(0.0, hull - uni) / hull;
}

namespace {

// Squared center distance over squared enclosing diagonal, or a negative
// value when the enclosing box has zero diagonal.
double CenterPenalty(const Box& a, const Box& b) {
  const Box c = Enclosing(a, b);
  const double diag2 = c.width() * c.width() + c.height() * c.height();
  if (diag2 <= 0.0) return -1.0;
  const double ddx = a.center_x() - b.center_x();
  const double ddy = a.center_y() - b.center_y();
  return (ddx * ddx + ddy * ddy) / diag2;
}

}  // namespace

double DIoU(const Box& a, const Box& b) {
  const double iou = IoU(a, b);
  const double penalty = CenterPenalty(a, b);
  if (penalty < 0.0) return iou;
  return iou - penalty;
}

double CIoU(const Box& a, const Box& b) {
  const double iou = IoU(a, b);
  const double penalty = CenterPenalty(a, b);
  if (penalty < 0.0) return iou;
  // atan2(w, h) == atan(w / h) for non-negative sides and stays defined at
  // h == 0.
  const double angle = std::atan2(a.width(), a.height()) -
                       std::atan2(b.width(), b.height());
  const double v = 4.0 / (std::numbers::pi * std::numbers::pi) * angle * angle;
  const double denom = (1.0 - iou) + v;
  const double alpha = denom > 0.0 ? v / denom : 0.0;
  return iou - penalty - alpha * v;
}

Delta Encode(const Box& b, const Box& g) {
  if (!(b.width() > 0.0 && b.height() > 0.0)) {
    ThrowInvalid("encode: source box must have positive width and height");
  }
  if (!(g.width() > 0.0 && g.height() > 0.0)) {
    ThrowInvalid("encode: target box must have positive width and height");
  }
  return {(g.center_x() - b.center_x()) / b.width(),
          (g.center_y() - b.center_y()) / b.height(),
          std::log(g.width() / b.width()), std::log(g.height() / b.height())};
}

Box Decode(const Box& b, const Delta& d, double max_log_scale) {
  const double w = b.width();
  const double h = b.height();
  // Offsets from the original corners, so a zero delta returns b exactly.
  const double grow_w = std::expm1(std::min(d.dw, max_log_scale));
  const double grow_h = std::expm1(std::min(d.dh, max_log_scale));
  return {b.x1 + w * (d.dx - 0.5 * grow_w), b.y1 + h * (d.dy - 0.5 * grow_h),
          b.x2 + w * (d.dx + 0.5 * grow_w), b.y2 + h * (d.dy + 0.5 * grow_h)};
}

Box Clip(const Box& b, double width, double height) {
  return {std::clamp(b.x1, 0.0, width), std::clamp(b.y1, 0.0, height),
          std::clamp(b.x2, 0.0, width), std::clamp(b.y2, 0.0, height)};
}

}  // namespace uwdet
