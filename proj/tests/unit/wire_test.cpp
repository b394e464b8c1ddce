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

#include <random>

#include "herd/error.hpp"
#include "herd/sim/wire.hpp"

namespace herd::sim {
namespace {

using Bytes = std::vector<std::uint8_t>;

TEST(Wire, AckGoldenBytes) {
  const auto bytes = encode_message(make_ack(0x0102, 0x0A0B0C0D, 5));
  EXPECT_EQ(bytes, (Bytes{3, 0x02, 0x01, 0x0D, 0x0C, 0x0B, 0x0A, 5, 0, 0, 0}));
}

TEST(Wire, ActivityAndNotificationGoldenBytes) {
  EXPECT_EQ(encode_message(make_activity(7, 1000, 7, 2)), (Bytes{2, 7, 0, 0xE8, 0x03, 0, 0, 7, 2}));
  EXPECT_EQ(encode_message(make_notification(1, 0, 3, "go")), (Bytes{4, 1, 0, 0, 0, 0, 0, 3, 2, 'g', 'o'}));
}

TEST(Wire, DetectionGoldenBytes) {
  DeviceMessage m{9, 1, DetectionPayload{{WireDetection{2, 900, {0, 65535, 1, 256}}}}};
  EXPECT_EQ(encode_message(m),
            (Bytes{1, 9, 0, 1, 0, 0, 0, 1, 2, 0x84, 0x03, 0, 0, 0xFF, 0xFF, 1, 0, 0, 1}));
}

DeviceMessage random_message(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> byte(0, 255);
  DeviceMessage m;
  m.device_id = static_cast<std::uint16_t>(rng());
  m.timestamp = static_cast<std::uint32_t>(rng());
  switch (rng() % 4) {
    case 0: {
      DetectionPayload p;
      const auto n = rng() % 20;
      for (std::size_t i = 0; i < n; ++i) {
        WireDetection d;
        d.class_id = static_cast<std::uint8_t>(byte(rng));
        d.score_milli = static_cast<std::uint16_t>(rng() % 1001);
        for (auto& c : d.box) c = static_cast<std::uint16_t>(rng());
        p.detections.push_back(d);
      }
      m.payload = p;
      break;
    }
    case 1: m.payload = ActivityPayload{static_cast<std::uint8_t>(rng() % 8), static_cast<std::uint8_t>(rng() % 3)}; break;
    case 2: m.payload = AckPayload{static_cast<std::uint32_t>(rng())}; break;
    default: {
      std::string text(rng() % 256, 'x');
      for (auto& c : text) c = static_cast<char>(byte(rng));
      m.payload = NotificationPayload{static_cast<std::uint8_t>(rng() % 4), text};
    }
  }
  return m;
}

TEST(Wire, RoundTripRandomMessages) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 2000; ++i) {
    const auto m = random_message(rng);
    const auto bytes = encode_message(m);
    ASSERT_EQ(decode_message(bytes), m);
  }
}

TEST(Wire, DecoderRejectsDamage) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 500; ++i) {
    const auto bytes = encode_message(random_message(rng));
    const Bytes truncated(bytes.begin(), bytes.end() - 1);
    EXPECT_THROW(decode_message(truncated), FormatError);
    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(decode_message(trailing), FormatError);
  }
  EXPECT_THROW(decode_message(Bytes{9, 0, 0, 0, 0, 0, 0}), FormatError);
  EXPECT_THROW(decode_message(Bytes{}), FormatError);
  EXPECT_THROW(decode_message(Bytes{2, 0, 0, 0, 0, 0, 0, 8, 0}), FormatError);  // label 8
  EXPECT_THROW(decode_message(Bytes{2, 0, 0, 0, 0, 0, 0, 7, 3}), FormatError);  // severity 3
  EXPECT_THROW(decode_message(Bytes{4, 0, 0, 0, 0, 0, 0, 4, 0}), FormatError);  // level 4
}

TEST(Wire, ValidateRanges) {
  EXPECT_THROW(validate(make_activity(1, 0, 8, 0)), InvalidArgument);
  EXPECT_THROW(validate(make_notification(1, 0, 1, std::string(256, 'a'))), InvalidArgument);
  DeviceMessage big{1, 0, DetectionPayload{std::vector<WireDetection>(256)}};
  EXPECT_THROW(encode_message(big), InvalidArgument);
}

TEST(Wire, DetectionConversion) {
  const Detection d{{0.1, 0.2, 0.5, 0.9}, 3, 0.8765};
  const auto back = from_wire(to_wire(d));
  EXPECT_EQ(back.class_id, 3);
  EXPECT_NEAR(back.score, 0.877, 1e-12);
  EXPECT_NEAR(back.box.x_min, 0.1, 1.0 / 65535);
  EXPECT_NEAR(back.box.y_max, 0.9, 1.0 / 65535);
  EXPECT_EQ(encode_unit(2.0), 65535);
  EXPECT_EQ(encode_unit(-1.0), 0);
  EXPECT_EQ(make_detection(1, 2, std::vector<Detection>{d}).type(), MsgType::kDetection);
}

}  // namespace
}  // namespace herd::sim
