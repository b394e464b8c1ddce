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

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "herd/detection.hpp"
#include "herd/error.hpp"

namespace herd {
namespace {

struct CellTarget {
  double x, y, w, h;  // x, y relative to the cell
  BoundingBox box;
  int class_id;
};

BoundingBox predicted_box(const float* p, std::uint32_t row, std::uint32_t col, double S) {
  const double cx = (col + static_cast<double>(p[0])) / S;
  const double cy = (row + static_cast<double>(p[1])) / S;
  const double hw = std::max(0.0, static_cast<double>(p[2])) / 2.0;
  const double hh = std::max(0.0, static_cast<double>(p[3])) / 2.0;
  return {cx - hw, cy - hh, cx + hw, cy + hh};
}

double sq(double v) { return v * v; }

}  // namespace

double yolo_loss(const YoloTensor& pred, const GroundTruth& gt, const YoloLossWeights& w) {
  pred.validate();
  const std::uint32_t S = pred.grid;
  std::vector<std::optional<CellTarget>> targets(static_cast<std::size_t>(S) * S);
  for (const auto& g : gt) {
    g.box.validate();
    if (g.box.area() <= 0.0) throw InvalidArgument("ground-truth box has zero area");
    if (g.class_id < 0 || g.class_id >= static_cast<int>(pred.classes)) {
      throw InvalidArgument("ground-truth class id out of range");
    }
    const double cx = (g.box.x_min + g.box.x_max) / 2.0;
    const double cy = (g.box.y_min + g.box.y_max) / 2.0;
    const auto col = std::min<std::uint32_t>(static_cast<std::uint32_t>(cx * S), S - 1);
    const auto row = std::min<std::uint32_t>(static_cast<std::uint32_t>(cy * S), S - 1);
    auto& slot = targets[static_cast<std::size_t>(row) * S + col];
    if (slot) continue;
    slot = CellTarget{cx * S - col, cy * S - row, g.box.width(), g.box.height(), g.box, g.class_id};
  }

  double coord = 0.0, size = 0.0, obj = 0.0, noobj = 0.0, cls = 0.0;
  for (std::uint32_t row = 0; row < S; ++row) {
    for (std::uint32_t col = 0; col < S; ++col) {
      const auto& target = targets[static_cast<std::size_t>(row) * S + col];
      int responsible = -1;
      double best_iou = -1.0;
      if (target) {
        for (std::uint32_t b = 0; b < pred.boxes; ++b) {
          const double v = iou(predicted_box(pred.box(row, col, b), row, col, S), target->box);
          if (v > best_iou) {
            best_iou = v;
            responsible = static_cast<int>(b);
          }
        }
      }
      for (std::uint32_t b = 0; b < pred.boxes; ++b) {
        const float* p = pred.box(row, col, b);
        if (static_cast<int>(b) != responsible) {
          noobj += sq(p[4]);
          continue;
        }
        coord += sq(p[0] - target->x) + sq(p[1] - target->y);
        size += sq(std::sqrt(std::max(0.0, static_cast<double>(p[2]))) - std::sqrt(target->w)) +
                sq(std::sqrt(std::max(0.0, static_cast<double>(p[3]))) - std::sqrt(target->h));
        obj += sq(p[4] - best_iou);
      }
      if (target) {
        const float* probs = pred.class_probs(row, col);
        for (std::uint32_t c = 0; c < pred.classes; ++c) {
          cls += sq(probs[c] - (static_cast<int>(c) == target->class_id ? 1.0 : 0.0));
        }
      }
    }
  }
  return w.coord * (coord + size) + obj + w.noobj * noobj + cls;
}

}  // namespace herd
