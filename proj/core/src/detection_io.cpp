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

#include "herd/detection_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "herd/error.hpp"

namespace herd {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return fields;
}

struct LineParser {
  const std::string& source;
  std::size_t line_no;

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(source + ":" + std::to_string(line_no) + ": " + what);
  }

  double real(const std::string& s, const char* name) const {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      fail(std::string("bad ") + name + " '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) fail(std::string("bad ") + name + " '" + s + "'");
    return v;
  }

  int class_id(const std::string& s, int num_classes) const {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      fail("bad class_id '" + s + "'");
    }
    if (used != s.size()) fail("bad class_id '" + s + "'");
    if (v < 0 || v >= num_classes) fail("unknown class id " + s);
    return static_cast<int>(v);
  }

  BoundingBox box(const std::vector<std::string>& f, std::size_t at) const {
    BoundingBox b{real(f[at], "x_min"), real(f[at + 1], "y_min"), real(f[at + 2], "x_max"),
                  real(f[at + 3], "y_max")};
    try {
      b.validate();
    } catch (const InvalidArgument& e) {
      fail(e.what());
    }
    return b;
  }
};

template <class Fn>
void for_each_record(std::istream& in, const std::string& source, std::size_t arity, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto fields = split_fields(line);
    LineParser p{source, line_no};
    if (fields.size() != arity) {
      p.fail("expected " + std::to_string(arity) + " fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) p.fail("empty image_id");
    fn(p, fields);
  }
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

DetectionsByImage read_detections(std::istream& in, const std::string& source, int num_classes) {
  DetectionsByImage out;
  for_each_record(in, source, 7, [&](const LineParser& p, const std::vector<std::string>& f) {
    Detection d;
    d.class_id = p.class_id(f[1], num_classes);
    d.score = p.real(f[2], "score");
    if (d.score < 0.0 || d.score > 1.0) p.fail("score outside [0, 1]");
    d.box = p.box(f, 3);
    out[f[0]].push_back(d);
  });
  return out;
}

GroundTruthByImage read_ground_truth(std::istream& in, const std::string& source, int num_classes) {
  GroundTruthByImage out;
  for_each_record(in, source, 6, [&](const LineParser& p, const std::vector<std::string>& f) {
    GroundTruthBox g;
    g.class_id = p.class_id(f[1], num_classes);
    g.box = p.box(f, 2);
    out[f[0]].push_back(g);
  });
  return out;
}

DetectionsByImage read_detections_file(const std::filesystem::path& path, int num_classes) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open detections file " + path.string());
  return read_detections(in, path.string(), num_classes);
}

GroundTruthByImage read_ground_truth_file(const std::filesystem::path& path, int num_classes) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open ground-truth file " + path.string());
  return read_ground_truth(in, path.string(), num_classes);
}

void write_detections(std::ostream& out, const DetectionsByImage& dets) {
  for (const auto& [image, list] : dets) {
    for (const auto& d : list) {
      out << image << ',' << d.class_id << ',' << fmt6(d.score) << ',' << fmt6(d.box.x_min) << ','
          << fmt6(d.box.y_min) << ',' << fmt6(d.box.x_max) << ',' << fmt6(d.box.y_max) << '\n';
    }
  }
}

void write_ground_truth(std::ostream& out, const GroundTruthByImage& gt) {
  for (const auto& [image, list] : gt) {
    for (const auto& g : list) {
      out << image << ',' << g.class_id << ',' << fmt6(g.box.x_min) << ',' << fmt6(g.box.y_min)
          << ',' << fmt6(g.box.x_max) << ',' << fmt6(g.box.y_max) << '\n';
    }
  }
}

MapResult evaluate_map(const DetectionsByImage& dets, const GroundTruthByImage& gt,
                       double iou_threshold) {
  std::set<std::string> images;
  for (const auto& [id, _] : dets) images.insert(id);
  for (const auto& [id, _] : gt) images.insert(id);
  std::vector<std::vector<Detection>> d;
  std::vector<GroundTruth> g;
  for (const auto& id : images) {
    auto di = dets.find(id);
    auto gi = gt.find(id);
    d.push_back(di == dets.end() ? std::vector<Detection>{} : di->second);
    g.push_back(gi == gt.end() ? GroundTruth{} : gi->second);
  }
  return mean_average_precision(d, g, iou_threshold);
}

}  // namespace herd
