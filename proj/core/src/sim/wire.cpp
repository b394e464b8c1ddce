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

#include "herd/sim/wire.hpp"

#include <algorithm>
#include <cmath>

#include "herd/bytes.hpp"
#include "herd/error.hpp"

namespace herd::sim {

std::string_view msg_type_name(MsgType t) {
  switch (t) {
    case MsgType::kDetection: return "DETECTION";
    case MsgType::kActivity: return "ACTIVITY";
    case MsgType::kAck: return "ACK";
    case MsgType::kNotification: return "NOTIFICATION";
  }
  return "?";
}

MsgType DeviceMessage::type() const {
  return static_cast<MsgType>(payload.index() + 1);
}

namespace {

template <class... F>
struct Overload : F... {
  using F::operator()...;
};
template <class... F>
Overload(F...) -> Overload<F...>;

}  // namespace

void validate(const DeviceMessage& m) {
  std::visit(Overload{
                 [](const DetectionPayload& p) {
                   if (p.detections.size() > 255) throw InvalidArgument("more than 255 detections");
                   for (const auto& d : p.detections) {
                     if (d.score_milli > 1000) throw InvalidArgument("score above 1000 milli");
                   }
                 },
                 [](const ActivityPayload& p) {
                   if (p.label > 7) throw InvalidArgument("activity label above 7");
                   if (p.severity > 2) throw InvalidArgument("severity above 2");
                 },
                 [](const AckPayload&) {},
                 [](const NotificationPayload& p) {
                   if (p.level > 3) throw InvalidArgument("notification level above 3");
                   if (p.text.size() > 255) throw InvalidArgument("notification text over 255 bytes");
                 },
             },
             m.payload);
}

std::vector<std::uint8_t> encode_message(const DeviceMessage& m) {
  validate(m);
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(m.type()));
  w.u16(m.device_id);
  w.u32(m.timestamp);
  std::visit(Overload{
                 [&](const DetectionPayload& p) {
                   w.u8(static_cast<std::uint8_t>(p.detections.size()));
                   for (const auto& d : p.detections) {
                     w.u8(d.class_id);
                     w.u16(d.score_milli);
                     for (auto c : d.box) w.u16(c);
                   }
                 },
                 [&](const ActivityPayload& p) {
                   w.u8(p.label);
                   w.u8(p.severity);
                 },
                 [&](const AckPayload& p) { w.u32(p.acked_timestamp); },
                 [&](const NotificationPayload& p) {
                   w.u8(p.level);
                   w.u8(static_cast<std::uint8_t>(p.text.size()));
                   w.bytes(p.text);
                 },
             },
             m.payload);
  return w.take();
}

DeviceMessage decode_message(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const std::uint8_t type = r.u8();
  DeviceMessage m;
  m.device_id = r.u16();
  m.timestamp = r.u32();
  switch (type) {
    case static_cast<std::uint8_t>(MsgType::kDetection): {
      DetectionPayload p;
      const std::size_t n = r.u8();
      p.detections.resize(n);
      for (auto& d : p.detections) {
        d.class_id = r.u8();
        d.score_milli = r.u16();
        for (auto& c : d.box) c = r.u16();
      }
      m.payload = std::move(p);
      break;
    }
    case static_cast<std::uint8_t>(MsgType::kActivity): {
      ActivityPayload p;
      p.label = r.u8();
      p.severity = r.u8();
      m.payload = p;
      break;
    }
    case static_cast<std::uint8_t>(MsgType::kAck):
      m.payload = AckPayload{r.u32()};
      break;
    case static_cast<std::uint8_t>(MsgType::kNotification): {
      NotificationPayload p;
      p.level = r.u8();
      p.text = r.bytes(r.u8());
      m.payload = std::move(p);
      break;
    }
    default:
      throw FormatError("unknown message type " + std::to_string(type));
  }
  if (!r.done()) throw FormatError(std::to_string(r.remaining()) + " trailing bytes in message");
  try {
    validate(m);
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  return m;
}

std::uint16_t encode_unit(double v) {
  return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
}

double decode_unit(std::uint16_t v) { return static_cast<double>(v) / 65535.0; }

WireDetection to_wire(const Detection& d) {
  if (d.class_id < 0 || d.class_id > 255) throw InvalidArgument("class id does not fit in u8");
  WireDetection w;
  w.class_id = static_cast<std::uint8_t>(d.class_id);
  w.score_milli = static_cast<std::uint16_t>(std::lround(std::clamp(d.score, 0.0, 1.0) * 1000.0));
  w.box[0] = encode_unit(d.box.x_min);
  w.box[1] = encode_unit(d.box.y_min);
  w.box[2] = encode_unit(d.box.x_max);
  w.box[3] = encode_unit(d.box.y_max);
  return w;
}

Detection from_wire(const WireDetection& w) {
  Detection d;
  d.class_id = w.class_id;
  d.score = w.score_milli / 1000.0;
  d.box = {decode_unit(w.box[0]), decode_unit(w.box[1]), decode_unit(w.box[2]), decode_unit(w.box[3])};
  return d;
}

DeviceMessage make_detection(std::uint16_t device, std::uint32_t ts, std::span<const Detection> dets) {
  DetectionPayload p;
  p.detections.reserve(dets.size());
  for (const auto& d : dets) p.detections.push_back(to_wire(d));
  return {device, ts, std::move(p)};
}

DeviceMessage make_activity(std::uint16_t device, std::uint32_t ts, std::uint8_t label,
                            std::uint8_t severity) {
  return {device, ts, ActivityPayload{label, severity}};
}

DeviceMessage make_ack(std::uint16_t device, std::uint32_t ts, std::uint32_t acked) {
  return {device, ts, AckPayload{acked}};
}

DeviceMessage make_notification(std::uint16_t device, std::uint32_t ts, std::uint8_t level,
                                std::string text) {
  return {device, ts, NotificationPayload{level, std::move(text)}};
}

}  // namespace herd::sim
