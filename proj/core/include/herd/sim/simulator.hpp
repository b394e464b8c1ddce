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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "herd/sim/device.hpp"

namespace herd::sim {

struct GatewaySpec {
  std::uint16_t id = 0;
  Position position;
  std::uint32_t frame_period_ms = 1000;
  std::uint32_t start_ms = 0;
  std::uint32_t inference_ms = 0;
  DetectorSettings settings;
  std::optional<DetectorModel> detector;
  std::vector<FrameInput> frames;  // cycled, one per frame period
};

// One collar cycle. A scripted label skips classification; otherwise the
// scene distribution is fused with either a synthetic window of `behavior`
// (classified by the collar's behavior model, or taken as one-hot without
// one) or the given behavior distribution.
struct CollarInput {
  std::optional<FusedLabel> label;
  EnvProbs env{};
  std::optional<BehaviorLabel> behavior;
  BehaviorProbs behavior_probs{};
};

struct CollarSpec {
  std::uint16_t id = 0;
  Position position;
  std::uint32_t step_period_ms = 1000;
  std::uint32_t start_ms = 0;
  std::uint32_t log_interval_ms = kLogIntervalMs;
  Type2Pipeline pipeline;
  std::vector<CollarInput> inputs;  // cycled, one per step period
};

struct Scenario {
  std::vector<GatewaySpec> gateways;
  std::vector<CollarSpec> collars;
  double range_m = kDefaultRangeM;
  double drop_probability = 0.0;
  std::uint32_t radio_latency_ms = 5;
  std::uint32_t ipc_latency_ms = 1;
  // How long a received ACTIVITY waits for a DETECTION before the message
  // core runs a cycle with B = 0. Zero means twice the gateway frame period.
  std::uint32_t activity_timeout_ms = 0;
  std::uint32_t horizon_ms = 0;
  std::uint64_t seed = 0;
};

// Throws InvalidArgument naming the offending device.
void validate_scenario(const Scenario& s);

// JSON scenario; weight-file paths resolve against `base_dir`. Throws
// FormatError naming the offending field.
Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

struct DeviceReport {
  std::uint16_t id = 0;
  std::string type;  // "gateway" or "collar"
  std::vector<std::pair<std::string, std::uint64_t>> counters;
  std::vector<ActivityRecord> log;  // collars only
  RangeSummary summary = RangeSummary::kMixed;
};

struct NotificationEvent {
  std::uint32_t time_ms = 0;
  std::uint16_t device_id = 0;
  int level = 0;
  int severity_score = 0;
  int animal_count = 0;
  std::uint32_t receivers = 0;
  friend bool operator==(const NotificationEvent&, const NotificationEvent&) = default;
};

struct SimReport {
  std::uint64_t seed = 0;
  std::uint32_t horizon_ms = 0;
  std::uint64_t events = 0;
  std::vector<DeviceReport> devices;  // sorted by id
  std::vector<NotificationEvent> notifications;
  std::array<std::uint64_t, 4> notifications_by_level{};
  std::uint64_t detections = 0;
  std::uint64_t acks = 0;
  std::uint64_t unacked_detections = 0;
  std::uint64_t duplicate_acks = 0;
  std::uint64_t ack_latency_min_ms = 0;
  std::uint64_t ack_latency_max_ms = 0;
  double ack_latency_mean_ms = 0.0;
  std::uint64_t radio_delivered = 0;
  std::uint64_t radio_out_of_range = 0;
  std::uint64_t radio_dropped = 0;
  std::uint64_t malformed_dropped = 0;
};

// Runs the fleet until `horizon_ms`: periodic frames and collar cycles start
// strictly before the horizon, in-flight messages are then drained so every
// DETECTION gets its ACK. Deterministic for a given scenario and seed.
SimReport run_simulation(const Scenario& s, std::uint32_t horizon_ms, std::uint64_t seed);
inline SimReport run_simulation(const Scenario& s) { return run_simulation(s, s.horizon_ms, s.seed); }

// Stable, pretty-printed JSON with a fixed key order.
std::string report_to_json(const SimReport& r);

}  // namespace herd::sim
