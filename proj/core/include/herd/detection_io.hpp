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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "herd/detection.hpp"

namespace herd {

// Line-delimited interchange, one record per line, comma separated:
//   detections:    image_id,class_id,score,x_min,y_min,x_max,y_max
//   ground truth:  image_id,class_id,x_min,y_min,x_max,y_max
// Reals are written with 6 decimal places. Blank lines and lines starting
// with '#' are skipped. Malformed rows raise FormatError naming the source
// and line number; class ids outside [0, num_classes) are rejected.
using DetectionsByImage = std::map<std::string, std::vector<Detection>>;
using GroundTruthByImage = std::map<std::string, GroundTruth>;

DetectionsByImage read_detections(std::istream& in, const std::string& source, int num_classes);
GroundTruthByImage read_ground_truth(std::istream& in, const std::string& source, int num_classes);
DetectionsByImage read_detections_file(const std::filesystem::path& path, int num_classes);
GroundTruthByImage read_ground_truth_file(const std::filesystem::path& path, int num_classes);

void write_detections(std::ostream& out, const DetectionsByImage& dets);
void write_ground_truth(std::ostream& out, const GroundTruthByImage& gt);

// Aligns both maps on the union of image ids and runs mean_average_precision.
MapResult evaluate_map(const DetectionsByImage& dets, const GroundTruthByImage& gt,
                       double iou_threshold);

}  // namespace herd
