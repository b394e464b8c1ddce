// Copyright (c) 2026 The Herd Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "herd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herd/error.hpp"

namespace herd {

double BoundingBox::area() const {
  return std::max(0.0, width()) * std::max(0.0, height());
}

void BoundingBox::validate() const {
  for (double v : {x_min, y_min, x_max, y_max}) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("box coordinate outside [0, 1]");
  }
  if (x_min > x_max || y_min > y_max) throw InvalidArgument("box has min > max");
}

YoloTensor YoloTensor::zeros(std::uint32_t grid, std::uint32_t boxes, std::uint32_t classes) {
  YoloTensor t;
  t.grid = grid;
  t.boxes = boxes;
  t.classes = classes;
  t.data.assign(static_cast<std::size_t>(grid) * grid * t.cell_size(), 0.0f);
  return t;
}

YoloTensor YoloTensor::from_tensor(const FloatTensor& x, std::uint32_t grid, std::uint32_t boxes,
                                   std::uint32_t classes) {
  YoloTensor t;
  t.grid = grid;
  t.boxes = boxes;
  t.classes = classes;
  t.data.assign(x.data().begin(), x.data().end());
  t.validate();
  return t;
}

void YoloTensor::validate() const {
  if (grid == 0 || boxes == 0 || classes == 0) throw ShapeError("YOLO grid dimensions must be positive");
  const std::size_t want = static_cast<std::size_t>(grid) * grid * cell_size();
  if (data.size() != want) {
    throw ShapeError("YOLO tensor has " + std::to_string(data.size()) + " values, S=" +
                     std::to_string(grid) + " B=" + std::to_string(boxes) + " C=" +
                     std::to_string(classes) + " needs " + std::to_string(want));
  }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Detection> decode_yolo(const YoloTensor& t, double score_threshold) {
  t.validate();
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw InvalidArgument("score threshold must lie in [0, 1]");
  }
  std::vector<Detection> out;
  const double S = t.grid;
  for (std::uint32_t row = 0; row < t.grid; ++row) {
    for (std::uint32_t col = 0; col < t.grid; ++col) {
      const float* probs = t.class_probs(row, col);
      const auto best = std::max_element(probs, probs + t.classes);
      const int cls = static_cast<int>(best - probs);
      for (std::uint32_t b = 0; b < t.boxes; ++b) {
        const float* p = t.box(row, col, b);
        const double score = std::clamp(static_cast<double>(p[4]) * *best, 0.0, 1.0);
        if (score < score_threshold) continue;
        const double cx = (col + static_cast<double>(p[0])) / S;
        const double cy = (row + static_cast<double>(p[1])) / S;
        const double hw = std::max(0.0, static_cast<double>(p[2])) / 2.0;
        const double hh = std::max(0.0, static_cast<double>(p[3])) / 2.0;
        Detection d;
        d.box = {std::clamp(cx - hw, 0.0, 1.0), std::clamp(cy - hh, 0.0, 1.0),
                 std::clamp(cx + hw, 0.0, 1.0), std::clamp(cy + hh, 0.0, 1.0)};
        d.class_id = cls;
        d.score = score;
        out.push_back(d);
      }
    }
  }
  return out;
}

bool detection_rank_less(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.class_id != b.class_id) return a.class_id < b.class_id;
  return a.box.x_min < b.box.x_min;
}

std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw InvalidArgument("IoU threshold must lie in [0, 1]");
  }
  std::stable_sort(dets.begin(), dets.end(), detection_rank_less);
  std::vector<Detection> kept;
  for (const auto& d : dets) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return k.class_id == d.class_id && iou(k.box, d.box) > iou_threshold;
    });
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

}  // namespace herd
