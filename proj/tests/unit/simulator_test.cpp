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

#include "herd/sim/simulator.hpp"

namespace herd::sim {
namespace {

const std::filesystem::path kFixtures{HERD_FIXTURE_DIR};

std::uint64_t counter(const DeviceReport& d, std::string_view name) {
  for (const auto& [k, v] : d.counters) {
    if (k == name) return v;
  }
  ADD_FAILURE() << "no counter " << name;
  return 0;
}

TEST(Simulator, EscapeScenarioRaisesLevelThree) {
  const auto r = run_simulation(load_scenario(kFixtures / "scenario_escape.json"));
  ASSERT_FALSE(r.notifications.empty());
  for (const auto& n : r.notifications) {
    EXPECT_EQ(n.level, 3);
    EXPECT_EQ(n.severity_score, 7);
    EXPECT_EQ(n.animal_count, 4);
  }
  EXPECT_EQ(r.notifications_by_level[3], r.notifications.size());
  EXPECT_EQ(r.detections, 10u);
  EXPECT_EQ(r.acks, r.detections);
  EXPECT_EQ(r.unacked_detections, 0u);
  EXPECT_EQ(r.duplicate_acks, 0u);
}

TEST(Simulator, OutOfRangeCollarRaisesNothing) {
  const auto r = run_simulation(load_scenario(kFixtures / "scenario_escape_far.json"));
  EXPECT_TRUE(r.notifications.empty());
  EXPECT_EQ(r.radio_delivered, 0u);
  EXPECT_GT(r.radio_out_of_range, 0u);
  EXPECT_EQ(r.acks, r.detections);
}

TEST(Simulator, ByteIdenticalReports) {
  const auto s = load_scenario(kFixtures / "scenario_escape.json");
  EXPECT_EQ(report_to_json(run_simulation(s, 20000, 3)), report_to_json(run_simulation(s, 20000, 3)));
}

Scenario lossy_fleet() {
  Scenario s;
  s.range_m = 150;
  s.drop_probability = 0.3;
  for (std::uint16_t i = 0; i < 3; ++i) {
    GatewaySpec g;
    g.id = static_cast<std::uint16_t>(1 + i);
    g.position = {100.0 * i, 0};
    g.frame_period_ms = 700 + 100 * i;
    g.inference_ms = 90;
    for (int n = 0; n < 5; ++n) {
      std::vector<Detection> frame;
      for (int k = 0; k < n; ++k) frame.push_back({{0.1 * k, 0.1, 0.1 * k + 0.05, 0.2}, 0, 0.8});
      g.frames.push_back(frame);
    }
    s.gateways.push_back(g);
  }
  for (std::uint16_t i = 0; i < 4; ++i) {
    CollarSpec c;
    c.id = static_cast<std::uint16_t>(10 + i);
    c.position = {60.0 * i, 30};
    c.step_period_ms = 500;
    c.log_interval_ms = 2000;
    for (int l = 0; l < 8; ++l) {
      CollarInput in;
      in.label = static_cast<FusedLabel>((l + i) % 8);
      c.inputs.push_back(in);
    }
    s.collars.push_back(c);
  }
  return s;
}

TEST(Simulator, LossyFleetStillAcksEverything) {
  const auto s = lossy_fleet();
  const auto a = run_simulation(s, 30000, 1);
  EXPECT_GT(a.radio_dropped, 0u);
  EXPECT_GT(a.detections, 0u);
  EXPECT_EQ(a.acks, a.detections);
  EXPECT_EQ(a.unacked_detections, 0u);
  EXPECT_EQ(a.duplicate_acks, 0u);
  EXPECT_LE(a.ack_latency_min_ms, a.ack_latency_max_ms);
  for (const auto& d : a.devices) {
    if (d.type == "gateway") EXPECT_EQ(counter(d, "acks_received"), counter(d, "detections_sent"));
    if (d.type == "collar") EXPECT_LE(d.log.size(), 100u);
  }
  for (const auto& n : a.notifications) {
    EXPECT_GE(n.level, 1);
    EXPECT_LE(n.level, 3);
  }

  const auto b = run_simulation(s, 30000, 1);
  EXPECT_EQ(report_to_json(a), report_to_json(b));
  const auto c = run_simulation(s, 30000, 2);
  EXPECT_NE(report_to_json(a), report_to_json(c));
}

TEST(Simulator, DevicesSortedAndLogsCapped) {
  auto s = lossy_fleet();
  s.collars[0].log_interval_ms = 100;
  const auto r = run_simulation(s, 120000, 4);
  for (std::size_t i = 1; i < r.devices.size(); ++i) EXPECT_LT(r.devices[i - 1].id, r.devices[i].id);
  for (const auto& d : r.devices) {
    if (d.id == 10) EXPECT_EQ(d.log.size(), 100u);
  }
}

}  // namespace
}  // namespace herd::sim
