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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "herd/detection_io.hpp"
#include "herd/error.hpp"
#include "oracles.hpp"

namespace herd {
namespace {

const std::filesystem::path kFixtures{HERD_FIXTURE_DIR};

TEST(DetectionIo, RoundTrip) {
  DetectionsByImage dets{{"a", {{{0.1, 0.2, 0.3, 0.4}, 1, 0.75}}},
                         {"b", {{{0.0, 0.0, 1.0, 1.0}, 0, 0.5}, {{0.2, 0.2, 0.4, 0.4}, 2, 0.125}}}};
  std::stringstream ss;
  write_detections(ss, dets);
  EXPECT_EQ(read_detections(ss, "mem", 3), dets);

  GroundTruthByImage gt{{"a", {{1, {0.1, 0.2, 0.3, 0.4}}}}};
  std::stringstream gs;
  write_ground_truth(gs, gt);
  const auto back = read_ground_truth(gs, "mem", 3);
  ASSERT_EQ(back.at("a").size(), 1u);
  EXPECT_EQ(back.at("a")[0].box, gt.at("a")[0].box);
}

TEST(DetectionIo, SkipsCommentsAndBlankLines) {
  std::istringstream in("# header\n\nimg,0,0.5,0.1,0.1,0.2,0.2\n");
  EXPECT_EQ(read_detections(in, "mem", 1).at("img").size(), 1u);
}

TEST(DetectionIo, ErrorsNameSourceAndLine) {
  auto message = [](const std::string& text, int classes) {
    std::istringstream in(text);
    try {
      read_detections(in, "dets.csv", classes);
    } catch (const FormatError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("a,0,0.5,0.1,0.1,0.2,0.2\na,0,0.5,0.1\n", 2).find("dets.csv:2"), std::string::npos);
  EXPECT_NE(message("a,5,0.5,0.1,0.1,0.2,0.2\n", 2).find("dets.csv:1"), std::string::npos);
  EXPECT_NE(message("a,0,0.5,0.1,0.1,x,0.2\n", 2).find(":1"), std::string::npos);
  EXPECT_NE(message("a,0,0.5,0.3,0.1,0.2,0.2\n", 2).find(":1"), std::string::npos);
}

TEST(DetectionIo, FixturesMatchOracle) {
  const auto gt = read_ground_truth_file(kFixtures / "gt_mixed.csv", 4);
  for (const char* name : {"dets_perfect.csv", "dets_empty.csv", "dets_mixed.csv"}) {
    const auto dets = read_detections_file(kFixtures / name, 4);
    std::vector<std::vector<Detection>> d;
    std::vector<GroundTruth> g;
    for (const auto& [image, boxes] : gt) {
      g.push_back(boxes);
      auto it = dets.find(image);
      d.push_back(it == dets.end() ? std::vector<Detection>{} : it->second);
    }
    EXPECT_NEAR(evaluate_map(dets, gt, 0.5).map, testing::brute_force_map(d, g, 0.5), 1e-9) << name;
  }
  EXPECT_DOUBLE_EQ(evaluate_map(read_detections_file(kFixtures / "dets_perfect.csv", 4), gt, 0.5).map, 1.0);
  EXPECT_EQ(evaluate_map(read_detections_file(kFixtures / "dets_empty.csv", 4), gt, 0.5).map, 0.0);
}

TEST(DetectionIo, MissingFile) {
  EXPECT_THROW(read_detections_file(kFixtures / "nope.csv", 4), Error);
}

}  // namespace
}  // namespace herd
