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
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "herd/detection.hpp"
#include "herd/error.hpp"

namespace herd {

ApResult average_precision(std::span<const std::vector<Detection>> dets,
                           std::span<const GroundTruth> gt, int class_id, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw InvalidArgument("IoU threshold must lie in (0, 1]");
  }
  if (dets.size() != gt.size()) {
    throw InvalidArgument("detections cover " + std::to_string(dets.size()) +
                          " images, ground truth " + std::to_string(gt.size()));
  }

  struct Ranked {
    double score;
    std::size_t image;
    BoundingBox box;
  };
  std::vector<Ranked> ranked;
  for (std::size_t img = 0; img < dets.size(); ++img) {
    for (const auto& d : dets[img]) {
      if (d.class_id == class_id) ranked.push_back({d.score, img, d.box});
    }
  }
  // Total order independent of the input order within an image.
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(b.score, a.image, a.box.x_min, a.box.y_min, a.box.x_max, a.box.y_max) <
           std::tie(a.score, b.image, b.box.x_min, b.box.y_min, b.box.x_max, b.box.y_max);
  });

  std::vector<std::vector<const BoundingBox*>> truth(gt.size());
  std::vector<std::vector<bool>> used(gt.size());
  std::size_t positives = 0;
  for (std::size_t img = 0; img < gt.size(); ++img) {
    for (const auto& g : gt[img]) {
      if (g.class_id != class_id) continue;
      truth[img].push_back(&g.box);
      ++positives;
    }
    used[img].assign(truth[img].size(), false);
  }

  ApResult result;
  result.ground_truth = positives;
  result.detections = ranked.size();
  result.has_ground_truth = positives > 0;
  if (positives == 0) return result;

  std::vector<double> precision, recall;
  std::size_t tp = 0, fp = 0;
  for (const auto& r : ranked) {
    double best = -1.0;
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < truth[r.image].size(); ++k) {
      if (used[r.image][k]) continue;
      const double v = iou(r.box, *truth[r.image][k]);
      if (v > best) {
        best = v;
        best_k = k;
      }
    }
    if (best >= iou_threshold) {
      used[r.image][best_k] = true;
      ++tp;
    } else {
      ++fp;
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(positives));
  }

  double sum = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double level = k / 10.0;
    double p = 0.0;
    for (std::size_t i = 0; i < recall.size(); ++i) {
      if (recall[i] >= level) p = std::max(p, precision[i]);
    }
    sum += p;
  }
  result.ap = sum / 11.0;
  return result;
}

MapResult mean_average_precision(std::span<const std::vector<Detection>> dets,
                                 std::span<const GroundTruth> gt, double iou_threshold) {
  std::set<int> classes;
  for (const auto& image : gt) {
    for (const auto& g : image) classes.insert(g.class_id);
  }
  MapResult out;
  for (int c : classes) {
    auto r = average_precision(dets, gt, c, iou_threshold);
    out.map += r.ap;
    out.per_class.emplace_back(c, r);
  }
  if (!classes.empty()) out.map /= static_cast<double>(classes.size());
  return out;
}

}  // namespace herd
