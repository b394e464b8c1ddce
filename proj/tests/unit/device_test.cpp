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

#include "herd/behavior.hpp"
#include "herd/error.hpp"
#include "herd/model_zoo.hpp"
#include "herd/sim/device.hpp"

namespace herd::sim {
namespace {

std::vector<Detection> animals(int n) {
  std::vector<Detection> out;
  for (int i = 0; i < n; ++i) {
    const double x = 0.1 * i;
    out.push_back({{x, 0.0, x + 0.05, 0.05}, 0, 0.9});
  }
  return out;
}

void receive_activity(Type1State& g, std::uint8_t label, std::uint32_t at) {
  g.radio_inbox.push_back({at, encode_message(make_activity(2, at, label, label >= 6 ? 2 : 1))});
}

TEST(Gateway, DetectionIsAckedOnce) {
  Type1State g;
  g.id = 1;
  const auto sent = m7_step(g, animals(3), 100);
  EXPECT_EQ(sent.type(), MsgType::kDetection);
  ASSERT_EQ(g.ipc_to_m4.size(), 1u);

  const auto r = m4_step(g, 101);
  ASSERT_TRUE(r.ack.has_value());
  EXPECT_EQ(std::get<AckPayload>(r.ack->payload).acked_timestamp, 100u);
  ASSERT_TRUE(r.level.has_value());
  EXPECT_EQ(r.animal_count, 3);
  EXPECT_EQ(*r.level, 0);  // no activity: A = 0
  EXPECT_FALSE(r.notification.has_value());

  EXPECT_EQ(m7_collect_acks(g), std::vector<std::uint32_t>{100});
  EXPECT_EQ(g.ack_count.at(100), 1u);
  EXPECT_TRUE(m7_collect_acks(g).empty());
}

TEST(Gateway, EscapeWithHerdNotifiesAtLevelThree) {
  Type1State g;
  receive_activity(g, 7, 50);
  m7_step(g, animals(4), 100);
  const auto r = m4_step(g, 220);
  ASSERT_TRUE(r.notification.has_value());
  EXPECT_EQ(*r.level, 3);
  EXPECT_EQ(r.severity_score, 7);
  const auto& p = std::get<NotificationPayload>(r.notification->payload);
  EXPECT_EQ(p.level, 3);
  // The activity is consumed by the cycle that used it.
  m7_step(g, animals(4), 1100);
  const auto after = m4_step(g, 1220);  // A = 0, B = 4
  EXPECT_EQ(*after.level, 0);
  EXPECT_FALSE(after.notification.has_value());
}

TEST(Gateway, MostRecentActivityWins) {
  Type1State g;
  receive_activity(g, 7, 10);
  receive_activity(g, 4, 20);
  m7_step(g, animals(0), 30);
  EXPECT_EQ(m4_step(g, 40).severity_score, 4);
}

TEST(Gateway, TimerTickWaitsForTimeoutAndLeavesQueueAlone) {
  Type1State g;
  g.activity_timeout_ms = 2000;
  receive_activity(g, 7, 1000);
  m7_step(g, animals(2), 1500);

  auto early = m4_step(g, 2500, true);
  EXPECT_FALSE(early.level.has_value());
  EXPECT_EQ(g.ipc_to_m4.size(), 1u);

  // The pending detection is still there for the regular cycle.
  const auto regular = m4_step(g, 2600);
  ASSERT_TRUE(regular.ack.has_value());
  EXPECT_EQ(regular.severity_score, 7);
  EXPECT_EQ(*regular.level, 2);  // floor(3/2) + floor(2/2)

  // A lone activity gets a B = 0 cycle once it is old enough.
  receive_activity(g, 6, 5000);
  EXPECT_FALSE(m4_step(g, 6999, true).level.has_value());
  const auto late = m4_step(g, 7000, true);
  ASSERT_TRUE(late.level.has_value());
  EXPECT_EQ(late.animal_count, 0);
  EXPECT_EQ(*late.level, 1);
  EXPECT_FALSE(m4_step(g, 9000, true).level.has_value());
}

TEST(Gateway, MalformedMessagesAreDroppedAndCounted) {
  Type1State g;
  g.radio_inbox.push_back({0, {2, 0, 0}});
  g.ipc_to_m4.push_back({1, 2, 3});
  g.ack_to_m7.push_back({3});
  const auto r = m4_step(g, 10);
  EXPECT_FALSE(r.ack.has_value());
  EXPECT_TRUE(m7_collect_acks(g).empty());
  EXPECT_EQ(g.metrics.malformed_dropped, 3u);
}

TEST(Gateway, RawGridFramesGoThroughNms) {
  Type1State g;
  auto t = YoloTensor::zeros(2, 2, 1);
  for (std::uint32_t b = 0; b < 2; ++b) {
    float* p = t.box(0, 0, b);
    p[0] = p[1] = 0.5f;
    p[2] = p[3] = 0.3f;
    p[4] = 0.9f - 0.1f * static_cast<float>(b);
  }
  t.class_probs(0, 0)[0] = 1.0f;
  const auto msg = m7_step(g, t, 0);
  EXPECT_EQ(std::get<DetectionPayload>(msg.payload).detections.size(), 1u);
}

TEST(Collar, BroadcastsOnlyYellowAndRed) {
  Type2State c;
  c.id = 2;
  c.log_interval_ms = 1000;
  for (int label = 0; label < 8; ++label) {
    const auto r = type2_step_label(c, static_cast<FusedLabel>(label), static_cast<std::uint32_t>(label) * 1000);
    EXPECT_EQ(r.activity.has_value(), label >= 4) << label;
    if (r.activity) {
      const auto& p = std::get<ActivityPayload>(r.activity->payload);
      EXPECT_EQ(p.label, label);
      EXPECT_EQ(p.severity, label >= 6 ? 2 : 1);
    }
  }
  EXPECT_EQ(c.metrics.activities_sent, 4u);
}

TEST(Collar, LogsOnCadence) {
  Type2State c;
  c.log_interval_ms = kLogIntervalMs;
  int logged = 0;
  for (std::uint32_t t = 0; t < 30 * 60 * 1000; t += 60 * 1000) {
    logged += type2_step_label(c, FusedLabel::kGrazingSafe, t).logged;
  }
  EXPECT_EQ(logged, 6);
  EXPECT_EQ(c.log.size(), 6u);
  EXPECT_EQ(c.log.records()[1].timestamp, kLogIntervalMs);
}

TEST(Collar, FullPipelineFusesBothModels) {
  Type2State c;
  c.pipeline.behavior = zoo::cnn_lstm({.window = 50, .conv_channels = {4}, .lstm_layers = 1, .hidden = 4}, 1);
  c.pipeline.env = zoo::env_classifier(8, 3, 1);
  c.pipeline.head = fit_fusion_head(table_dataset(), {.epochs = 500}).head;
  const auto window = synthetic_behavior_windows(1, 3, 50)[0];
  FloatTensor image({8, 8, 3});
  const auto r = type2_step(c, window, image, 0);
  EXPECT_EQ(r.severity, severity_of(r.label));

  Type2State bare;
  EXPECT_THROW(type2_step(bare, window, image, 0), ShapeError);
}

}  // namespace
}  // namespace herd::sim
