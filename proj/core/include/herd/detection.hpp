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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "herd/tensor.hpp"

namespace herd {

// Normalized image coordinates.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const;
  // Throws InvalidArgument unless min <= max on both axes and all
  // coordinates lie in [0, 1].
  void validate() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  BoundingBox box;
  int class_id = 0;
  double score = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruthBox {
  int class_id = 0;
  BoundingBox box;
};

// Ground truth of one image.
using GroundTruth = std::vector<GroundTruthBox>;

// Raw S x S x (5B + C) detector output. Each cell holds B records of
// (x, y, w, h, confidence) followed by C class probabilities; (x, y) is the box
// center relative to the cell, (w, h) relative to the whole image. Cells are
// stored row-major with the row (y) index first.
struct YoloTensor {
  std::uint32_t grid = 7;
  std::uint32_t boxes = 2;
  std::uint32_t classes = 4;
  std::vector<float> data;

  static YoloTensor zeros(std::uint32_t grid, std::uint32_t boxes, std::uint32_t classes);
  static YoloTensor from_tensor(const FloatTensor& t, std::uint32_t grid, std::uint32_t boxes,
                                std::uint32_t classes);

  std::size_t cell_size() const { return 5 * static_cast<std::size_t>(boxes) + classes; }
  std::size_t offset(std::uint32_t row, std::uint32_t col) const {
    return (static_cast<std::size_t>(row) * grid + col) * cell_size();
  }
  float* box(std::uint32_t row, std::uint32_t col, std::uint32_t b) {
    return data.data() + offset(row, col) + 5 * static_cast<std::size_t>(b);
  }
  const float* box(std::uint32_t row, std::uint32_t col, std::uint32_t b) const {
    return data.data() + offset(row, col) + 5 * static_cast<std::size_t>(b);
  }
  float* class_probs(std::uint32_t row, std::uint32_t col) {
    return data.data() + offset(row, col) + 5 * static_cast<std::size_t>(boxes);
  }
  const float* class_probs(std::uint32_t row, std::uint32_t col) const {
    return data.data() + offset(row, col) + 5 * static_cast<std::size_t>(boxes);
  }

  // Throws ShapeError when data.size() != S*S*(5B+C) or a dimension is zero.
  void validate() const;
};

// Intersection over union. Zero for disjoint boxes and when both are
// degenerate.
double iou(const BoundingBox& a, const BoundingBox& b);

// Score = confidence * max class probability, class = argmax. Boxes are
// clamped to the unit square; only scores >= threshold are emitted, in cell
// order.
std::vector<Detection> decode_yolo(const YoloTensor& t, double score_threshold);

// Greedy per-class suppression. Output is sorted by descending score with ties
// broken by (class_id, x_min).
std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold);

// Ordering used by nms: true when a ranks before b.
bool detection_rank_less(const Detection& a, const Detection& b);

struct YoloLossWeights {
  double coord = 5.0;
  double noobj = 0.5;
};

// Sum-squared YOLOv1 objective for one image. Each ground-truth box is
// assigned to the cell containing its center (the first box claims a cell);
// the responsible predictor is the box with the highest IoU against it, ties
// to the lower index. The confidence target of the responsible box is that
// IoU. Predicted w/h are clamped at 0 before the square root.
double yolo_loss(const YoloTensor& pred, const GroundTruth& gt, const YoloLossWeights& w = {});

struct ApResult {
  double ap = 0.0;
  bool has_ground_truth = false;
  std::size_t ground_truth = 0;
  std::size_t detections = 0;
};

// VOC2007 11-point interpolated AP of one class over a set of images.
// dets[i] and gt[i] describe image i.
ApResult average_precision(std::span<const std::vector<Detection>> dets,
                           std::span<const GroundTruth> gt, int class_id,
                           double iou_threshold = 0.5);

struct MapResult {
  double map = 0.0;
  std::vector<std::pair<int, ApResult>> per_class;  // ascending class id
};

// Unweighted mean of AP over the classes that occur in the ground truth.
MapResult mean_average_precision(std::span<const std::vector<Detection>> dets,
                                 std::span<const GroundTruth> gt, double iou_threshold = 0.5);

}  // namespace herd
