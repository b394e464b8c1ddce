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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "herd/detection.hpp"

namespace herd::sim {

enum class MsgType : std::uint8_t {
  kDetection = 1,
  kActivity = 2,
  kAck = 3,
  kNotification = 4,
};

std::string_view msg_type_name(MsgType t);

// One detected object on the wire. The score is carried in milli-units and
// the box as four u16 fixed-point fractions of the image (value / 65535).
struct WireDetection {
  std::uint8_t class_id = 0;
  std::uint16_t score_milli = 0;
  std::uint16_t box[4] = {0, 0, 0, 0};  // x_min, y_min, x_max, y_max

  friend bool operator==(const WireDetection&, const WireDetection&) = default;
};

struct DetectionPayload {
  std::vector<WireDetection> detections;  // at most 255
  friend bool operator==(const DetectionPayload&, const DetectionPayload&) = default;
};

struct ActivityPayload {
  std::uint8_t label = 0;     // fused label A, 0..7
  std::uint8_t severity = 0;  // 0 green, 1 yellow, 2 red
  friend bool operator==(const ActivityPayload&, const ActivityPayload&) = default;
};

struct AckPayload {
  std::uint32_t acked_timestamp = 0;
  friend bool operator==(const AckPayload&, const AckPayload&) = default;
};

struct NotificationPayload {
  std::uint8_t level = 0;  // N, 0..3
  std::string text;        // at most 255 bytes
  friend bool operator==(const NotificationPayload&, const NotificationPayload&) = default;
};

using Payload = std::variant<DetectionPayload, ActivityPayload, AckPayload, NotificationPayload>;

struct DeviceMessage {
  std::uint16_t device_id = 0;
  std::uint32_t timestamp = 0;
  Payload payload;

  MsgType type() const;
  friend bool operator==(const DeviceMessage&, const DeviceMessage&) = default;
};

// Throws InvalidArgument when the payload breaks a field range.
void validate(const DeviceMessage& m);

std::vector<std::uint8_t> encode_message(const DeviceMessage& m);
// Throws FormatError on unknown types, truncation, trailing bytes or
// out-of-range fields.
DeviceMessage decode_message(std::span<const std::uint8_t> bytes);

std::uint16_t encode_unit(double v);  // clamps to [0, 1]
double decode_unit(std::uint16_t v);
WireDetection to_wire(const Detection& d);
Detection from_wire(const WireDetection& w);

DeviceMessage make_detection(std::uint16_t device, std::uint32_t ts, std::span<const Detection> dets);
DeviceMessage make_activity(std::uint16_t device, std::uint32_t ts, std::uint8_t label,
                            std::uint8_t severity);
DeviceMessage make_ack(std::uint16_t device, std::uint32_t ts, std::uint32_t acked);
DeviceMessage make_notification(std::uint16_t device, std::uint32_t ts, std::uint8_t level,
                                std::string text);

}  // namespace herd::sim
