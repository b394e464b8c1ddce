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

#include "herd/sim/device.hpp"

#include <algorithm>
#include <string>

#include "herd/error.hpp"
#include "herd/sim/notification.hpp"

namespace herd::sim {
namespace {

std::vector<Detection> run_detector(const Type1State& d, const FrameInput& frame) {
  if (const auto* scripted = std::get_if<std::vector<Detection>>(&frame)) return *scripted;
  YoloTensor grid;
  if (const auto* raw = std::get_if<YoloTensor>(&frame)) {
    grid = *raw;
  } else {
    if (!d.detector) throw ShapeError("gateway has no detector model for image frames");
    const auto& m = *d.detector;
    grid = YoloTensor::from_tensor(forward_float(m.graph, std::get<FloatTensor>(frame)), m.grid,
                                   m.boxes, m.classes);
  }
  auto dets = nms(decode_yolo(grid, d.settings.score_threshold), d.settings.nms_iou);
  // The count field is one byte; nms output is ranked, so keep the best.
  if (dets.size() > 255) dets.resize(255);
  return dets;
}

std::string notification_text(int level, int a, int b) {
  std::string text = "N=" + std::to_string(level) + " A=" + std::to_string(a) + " B=" + std::to_string(b);
  if (a > 0) text += ": " + std::string(fused_label_meaning(static_cast<FusedLabel>(a)));
  if (text.size() > 255) text.resize(255);
  return text;
}

}  // namespace

DeviceMessage m7_step(Type1State& d, const FrameInput& frame, std::uint32_t now) {
  const auto dets = run_detector(d, frame);
  auto msg = make_detection(d.id, now, dets);
  d.ipc_to_m4.push_back(encode_message(msg));
  d.ack_count.try_emplace(now, 0);
  ++d.metrics.frames;
  ++d.metrics.detections_sent;
  d.metrics.inference_ms_total += d.inference_ms;
  return msg;
}

M4Result m4_step(Type1State& d, std::uint32_t now, bool timer_tick) {
  M4Result out;
  while (!d.radio_inbox.empty()) {
    const auto rx = std::move(d.radio_inbox.front());
    d.radio_inbox.pop_front();
    try {
      const auto msg = decode_message(rx.bytes);
      if (msg.type() != MsgType::kActivity) throw FormatError("unexpected message on radio inbox");
      d.current_activity = std::get<ActivityPayload>(msg.payload);
      d.activity_received_at = rx.at;
      ++d.metrics.activities_received;
    } catch (const FormatError&) {
      ++d.metrics.malformed_dropped;
    }
  }

  std::optional<int> animals;
  while (!timer_tick && !animals && !d.ipc_to_m4.empty()) {
    const Bytes raw = std::move(d.ipc_to_m4.front());
    d.ipc_to_m4.pop_front();
    try {
      const auto msg = decode_message(raw);
      if (msg.type() != MsgType::kDetection) throw FormatError("unexpected message on IPC queue");
      animals = static_cast<int>(std::get<DetectionPayload>(msg.payload).detections.size());
      out.ack = make_ack(d.id, now, msg.timestamp);
      d.ack_to_m7.push_back(encode_message(*out.ack));
      ++d.metrics.acks_sent;
      ++d.metrics.detections_processed;
    } catch (const FormatError&) {
      ++d.metrics.malformed_dropped;
    }
  }

  if (!animals) {
    if (!timer_tick || !d.current_activity ||
        now - d.activity_received_at < d.activity_timeout_ms) {
      return out;
    }
    animals = 0;
  }
  const int a = d.current_activity ? d.current_activity->label : 0;
  d.current_activity.reset();
  const int level = notification_level(a, *animals);
  out.level = level;
  out.severity_score = a;
  out.animal_count = *animals;
  if (level >= 1) {
    out.notification = make_notification(d.id, now, static_cast<std::uint8_t>(level),
                                         notification_text(level, a, *animals));
    ++d.metrics.notifications;
  }
  return out;
}

std::vector<std::uint32_t> m7_collect_acks(Type1State& d) {
  std::vector<std::uint32_t> acked;
  while (!d.ack_to_m7.empty()) {
    const Bytes raw = std::move(d.ack_to_m7.front());
    d.ack_to_m7.pop_front();
    try {
      const auto msg = decode_message(raw);
      if (msg.type() != MsgType::kAck) throw FormatError("unexpected message on ACK queue");
      const auto ts = std::get<AckPayload>(msg.payload).acked_timestamp;
      ++d.ack_count[ts];
      ++d.metrics.acks_received;
      acked.push_back(ts);
    } catch (const FormatError&) {
      ++d.metrics.malformed_dropped;
    }
  }
  return acked;
}

Type2Result type2_step_label(Type2State& d, FusedLabel label, std::uint32_t now) {
  Type2Result out;
  out.label = label;
  out.severity = severity_of(label);
  ++d.metrics.steps;
  if (!d.last_log_time || now - *d.last_log_time >= d.log_interval_ms) {
    log_activity(d.log, {now, static_cast<std::uint8_t>(label), static_cast<std::uint8_t>(out.severity)});
    d.last_log_time = now;
    out.logged = true;
    ++d.metrics.log_writes;
  }
  if (out.severity != Severity::kGreen) {
    out.activity = make_activity(d.id, now, static_cast<std::uint8_t>(label),
                                 static_cast<std::uint8_t>(out.severity));
    ++d.metrics.activities_sent;
  }
  return out;
}

Type2Result type2_step_probs(Type2State& d, const EnvProbs& env, const BehaviorProbs& beh,
                             std::uint32_t now) {
  return type2_step_label(d, fuse_probabilities(d.pipeline.head, env, beh).decision, now);
}

Type2Result type2_step(Type2State& d, const AccelWindow& window, const FloatTensor& image,
                       std::uint32_t now) {
  if (!d.pipeline.behavior || !d.pipeline.env) {
    throw ShapeError("collar pipeline needs both a behavior and an environment model");
  }
  return type2_step_probs(d, classify_scene(*d.pipeline.env, image),
                          classify_window(*d.pipeline.behavior, window), now);
}

}  // namespace herd::sim
