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

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "herd/behavior.hpp"
#include "herd/detection.hpp"
#include "herd/fusion.hpp"
#include "herd/graph.hpp"
#include "herd/sim/activity_log.hpp"
#include "herd/sim/radio.hpp"
#include "herd/sim/wire.hpp"

namespace herd::sim {

using Bytes = std::vector<std::uint8_t>;

// Detector for a gateway that runs a real graph on camera images. The graph
// must emit grid*grid*(5*boxes + classes) values.
struct DetectorModel {
  ModelGraph graph;
  std::uint32_t grid = 7;
  std::uint32_t boxes = 2;
  std::uint32_t classes = 4;
};

struct DetectorSettings {
  double score_threshold = 0.25;
  double nms_iou = 0.5;
};

// What the gateway camera produced for one frame: ground-truth style scripted
// detections, a raw detector output grid, or an image for the detector graph.
using FrameInput = std::variant<std::vector<Detection>, YoloTensor, FloatTensor>;

struct Type1Metrics {
  std::uint64_t frames = 0;
  std::uint64_t detections_sent = 0;
  std::uint64_t detections_processed = 0;
  std::uint64_t acks_sent = 0;
  std::uint64_t acks_received = 0;
  std::uint64_t activities_received = 0;
  std::uint64_t malformed_dropped = 0;
  std::uint64_t notifications = 0;
  std::uint64_t inference_ms_total = 0;
};

// Dual-core gateway. The detection core (M7) and the message core (M4) only
// share the two FIFO byte queues.
struct Type1State {
  std::uint16_t id = 0;
  Position position;
  std::optional<DetectorModel> detector;
  DetectorSettings settings;
  std::uint32_t inference_ms = 0;  // simulated per-frame latency

  std::deque<Bytes> ipc_to_m4;      // DETECTION messages
  std::deque<Bytes> ack_to_m7;      // ACKs coming back
  struct Received {
    std::uint32_t at = 0;
    Bytes bytes;
  };
  std::deque<Received> radio_inbox;  // ACTIVITY broadcasts received
  std::optional<ActivityPayload> current_activity;  // expires after one cycle
  std::uint32_t activity_received_at = 0;
  // How long an activity waits for a DETECTION before a B = 0 cycle.
  std::uint32_t activity_timeout_ms = 2000;

  // Detection timestamp -> number of ACKs received for it.
  std::map<std::uint32_t, std::uint32_t> ack_count;
  Type1Metrics metrics;
};

// Gateway detection task: obtain detections for the frame, encode a
// DETECTION and enqueue it for the message core. Returns the message sent.
DeviceMessage m7_step(Type1State& d, const FrameInput& frame, std::uint32_t now);

struct M4Result {
  std::optional<DeviceMessage> ack;           // reply for the processed DETECTION
  std::optional<DeviceMessage> notification;  // broadcast when N >= 1
  std::optional<int> level;                   // N, when a cycle was computed
  int severity_score = 0;                     // A used
  int animal_count = 0;                       // B used
};

// Gateway message task. Drains the radio inbox (the most recent ACTIVITY wins)
// and dequeues one DETECTION, replying with an ACK on the back queue, then
// computes N from (A, B) and emits a NOTIFICATION when N >= 1. A timer tick
// leaves the IPC queue alone and runs a B = 0 cycle only for an activity that
// has waited at least activity_timeout_ms. The activity is consumed by the
// cycle that uses it. Malformed messages are dropped and counted.
M4Result m4_step(Type1State& d, std::uint32_t now, bool timer_tick = false);

// Detection core side of the ACK queue: pops every ACK and tallies it.
// Returns the acknowledged detection timestamps.
std::vector<std::uint32_t> m7_collect_acks(Type1State& d);

struct Type2Pipeline {
  std::optional<ModelGraph> behavior;  // window -> 5 behavior probabilities
  std::optional<ModelGraph> env;       // image -> 3 scene probabilities
  FusionHead head;
};

struct Type2Metrics {
  std::uint64_t steps = 0;
  std::uint64_t activities_sent = 0;
  std::uint64_t log_writes = 0;
  std::uint64_t notifications_received = 0;
};

struct Type2State {
  std::uint16_t id = 0;
  Position position;
  Type2Pipeline pipeline;
  ActivityLog log;
  std::uint32_t log_interval_ms = kLogIntervalMs;
  std::optional<std::uint32_t> last_log_time;
  Type2Metrics metrics;
};

struct Type2Result {
  FusedLabel label = FusedLabel::kRestingSafe;
  Severity severity = Severity::kGreen;
  std::optional<DeviceMessage> activity;  // broadcast on yellow or red
  bool logged = false;
};

// Collar loop: classify the image and the window, fuse, log on the cadence
// and broadcast an ACTIVITY for yellow or red outcomes. Both models must be
// present.
Type2Result type2_step(Type2State& d, const AccelWindow& window, const FloatTensor& image,
                       std::uint32_t now);
// Same loop with modality outputs supplied directly.
Type2Result type2_step_probs(Type2State& d, const EnvProbs& env, const BehaviorProbs& beh,
                             std::uint32_t now);
// Same loop with the fused label supplied directly (scripted collars).
Type2Result type2_step_label(Type2State& d, FusedLabel label, std::uint32_t now);

}  // namespace herd::sim
