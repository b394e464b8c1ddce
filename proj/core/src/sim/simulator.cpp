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

#include "herd/sim/simulator.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "herd/error.hpp"

namespace herd::sim {
namespace {

enum class EventKind : std::uint8_t {
  kFrame,            // gateway M7 captures and enqueues a DETECTION
  kM4,               // gateway M4 services its queues
  kM4Timer,          // activity timeout tick
  kAckCollect,       // gateway M7 drains its ACK queue
  kCollarStep,       // collar classification / broadcast cycle
  kActivityArrival,  // ACTIVITY lands in a gateway radio inbox
};

struct Event {
  std::uint64_t time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kFrame;
  std::size_t device = 0;  // index into gateways or collars
  Bytes payload;

  // Min-heap on (time, seq): equal-time events fire in insertion order.
  bool operator>(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
};

class EventQueue {
 public:
  void push(std::uint64_t time, EventKind kind, std::size_t device, Bytes payload = {}) {
    q_.push(Event{time, seq_++, kind, device, std::move(payload)});
  }
  bool empty() const { return q_.empty(); }
  Event pop() {
    Event e = q_.top();
    q_.pop();
    return e;
  }

 private:
  std::priority_queue<Event, std::vector<Event>, std::greater<>> q_;
  std::uint64_t seq_ = 0;
};

std::uint32_t ts(std::uint64_t t) { return static_cast<std::uint32_t>(t); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the combined words.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (a + 1) + 0xBF58476D1CE4E5B9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Simulation {
 public:
  Simulation(const Scenario& s, std::uint32_t horizon, std::uint64_t seed)
      : s_(s), horizon_(horizon), seed_(seed), radio_(s.range_m, s.drop_probability, seed) {
    for (const auto& g : s.gateways) {
      Type1State st;
      st.id = g.id;
      st.position = g.position;
      st.detector = g.detector;
      st.settings = g.settings;
      st.inference_ms = g.inference_ms;
      st.activity_timeout_ms = s.activity_timeout_ms ? s.activity_timeout_ms : 2 * g.frame_period_ms;
      gateways_.push_back(std::move(st));
    }
    for (const auto& c : s.collars) {
      Type2State st;
      st.id = c.id;
      st.position = c.position;
      st.pipeline = c.pipeline;
      st.log_interval_ms = c.log_interval_ms;
      collars_.push_back(std::move(st));
    }
    collar_notifications_.assign(collars_.size(), 0);
    gateway_notifications_rx_.assign(gateways_.size(), 0);
    frame_index_.assign(gateways_.size(), 0);
    step_index_.assign(collars_.size(), 0);
  }

  SimReport run() {
    for (std::size_t i = 0; i < gateways_.size(); ++i) {
      if (s_.gateways[i].start_ms < horizon_) q_.push(s_.gateways[i].start_ms, EventKind::kFrame, i);
    }
    for (std::size_t i = 0; i < collars_.size(); ++i) {
      if (s_.collars[i].start_ms < horizon_) q_.push(s_.collars[i].start_ms, EventKind::kCollarStep, i);
    }
    while (!q_.empty()) {
      Event e = q_.pop();
      ++events_;
      dispatch(e);
    }
    return report();
  }

 private:
  void dispatch(Event& e) {
    const std::uint64_t now = e.time;
    switch (e.kind) {
      case EventKind::kFrame: {
        const auto& spec = s_.gateways[e.device];
        auto& g = gateways_[e.device];
        const auto& frame = spec.frames[frame_index_[e.device]++ % spec.frames.size()];
        m7_step(g, frame, ts(now));
        q_.push(now + spec.inference_ms + s_.ipc_latency_ms, EventKind::kM4, e.device);
        if (now + spec.frame_period_ms < horizon_) {
          q_.push(now + spec.frame_period_ms, EventKind::kFrame, e.device);
        }
        break;
      }
      case EventKind::kM4:
      case EventKind::kM4Timer: {
        auto& g = gateways_[e.device];
        const auto r = m4_step(g, ts(now), e.kind == EventKind::kM4Timer);
        if (r.ack) q_.push(now + s_.ipc_latency_ms, EventKind::kAckCollect, e.device);
        if (r.notification) broadcast_notification(e.device, *r.notification, r, now);
        break;
      }
      case EventKind::kAckCollect: {
        auto& g = gateways_[e.device];
        for (const auto acked : m7_collect_acks(g)) {
          latencies_.push_back(now - acked);
        }
        break;
      }
      case EventKind::kCollarStep: {
        const auto& spec = s_.collars[e.device];
        const std::size_t k = step_index_[e.device]++;
        const auto r = collar_cycle(e.device, spec.inputs[k % spec.inputs.size()], k, now);
        if (r.activity) broadcast_activity(e.device, *r.activity, now);
        if (now + spec.step_period_ms < horizon_) {
          q_.push(now + spec.step_period_ms, EventKind::kCollarStep, e.device);
        }
        break;
      }
      case EventKind::kActivityArrival: {
        auto& g = gateways_[e.device];
        g.radio_inbox.push_back({ts(now), std::move(e.payload)});
        q_.push(now + g.activity_timeout_ms, EventKind::kM4Timer, e.device);
        break;
      }
    }
  }

  Type2Result collar_cycle(std::size_t idx, const CollarInput& in, std::size_t step, std::uint64_t now) {
    auto& c = collars_[idx];
    if (in.label) return type2_step_label(c, *in.label, ts(now));
    BehaviorProbs beh = in.behavior_probs;
    if (in.behavior) {
      if (c.pipeline.behavior) {
        const auto windows = synthetic_behavior_windows(1, mix_seed(seed_, c.id, step));
        const auto it = std::find_if(windows.begin(), windows.end(),
                                     [&](const AccelWindow& w) { return w.label == in.behavior; });
        beh = classify_window(*c.pipeline.behavior, *it);
      } else {
        beh = {};
        beh[static_cast<std::size_t>(*in.behavior)] = 1.0;
      }
    }
    return type2_step_probs(c, in.env, beh, ts(now));
  }

  void broadcast_activity(std::size_t collar, const DeviceMessage& msg, std::uint64_t now) {
    const auto bytes = encode_message(msg);
    for (std::size_t g = 0; g < gateways_.size(); ++g) {
      if (radio(collars_[collar].position, gateways_[g].position)) {
        q_.push(now + s_.radio_latency_ms, EventKind::kActivityArrival, g, bytes);
      }
    }
  }

  void broadcast_notification(std::size_t gateway, const DeviceMessage& msg, const M4Result& r,
                              std::uint64_t now) {
    NotificationEvent ev;
    ev.time_ms = ts(now);
    ev.device_id = msg.device_id;
    ev.level = r.level.value_or(0);
    ev.severity_score = r.severity_score;
    ev.animal_count = r.animal_count;
    const Position& from = gateways_[gateway].position;
    for (std::size_t c = 0; c < collars_.size(); ++c) {
      if (radio(from, collars_[c].position)) {
        ++collar_notifications_[c];
        ++ev.receivers;
      }
    }
    for (std::size_t g = 0; g < gateways_.size(); ++g) {
      if (g != gateway && radio(from, gateways_[g].position)) {
        ++gateway_notifications_rx_[g];
        ++ev.receivers;
      }
    }
    notifications_.push_back(ev);
  }

  bool radio(const Position& from, const Position& to) {
    switch (radio_.deliver(from, to)) {
      case Delivery::kDelivered: ++delivered_; return true;
      case Delivery::kOutOfRange: ++out_of_range_; return false;
      case Delivery::kDropped: ++dropped_; return false;
    }
    return false;
  }

  SimReport report() const {
    SimReport r;
    r.seed = seed_;
    r.horizon_ms = horizon_;
    r.events = events_;
    r.notifications = notifications_;
    for (const auto& n : notifications_) ++r.notifications_by_level[static_cast<std::size_t>(n.level)];
    r.radio_delivered = delivered_;
    r.radio_out_of_range = out_of_range_;
    r.radio_dropped = dropped_;

    for (std::size_t i = 0; i < gateways_.size(); ++i) {
      const auto& g = gateways_[i];
      const auto& m = g.metrics;
      DeviceReport d;
      d.id = g.id;
      d.type = "gateway";
      d.counters = {{"frames", m.frames},
                    {"detections_sent", m.detections_sent},
                    {"detections_processed", m.detections_processed},
                    {"acks_sent", m.acks_sent},
                    {"acks_received", m.acks_received},
                    {"activities_received", m.activities_received},
                    {"notifications_sent", m.notifications},
                    {"notifications_received", gateway_notifications_rx_[i]},
                    {"malformed_dropped", m.malformed_dropped},
                    {"inference_ms_total", m.inference_ms_total}};
      r.devices.push_back(std::move(d));
      r.detections += m.detections_sent;
      r.acks += m.acks_received;
      r.malformed_dropped += m.malformed_dropped;
      for (const auto& [stamp, count] : g.ack_count) {
        if (count == 0) ++r.unacked_detections;
        if (count > 1) r.duplicate_acks += count - 1;
      }
    }
    for (std::size_t i = 0; i < collars_.size(); ++i) {
      const auto& c = collars_[i];
      DeviceReport d;
      d.id = c.id;
      d.type = "collar";
      d.counters = {{"steps", c.metrics.steps},
                    {"activities_sent", c.metrics.activities_sent},
                    {"log_writes", c.metrics.log_writes},
                    {"notifications_received", collar_notifications_[i]}};
      d.log = c.log.records();
      d.summary = query_history(c.log, 0).summary;
      r.devices.push_back(std::move(d));
    }
    std::sort(r.devices.begin(), r.devices.end(),
              [](const DeviceReport& a, const DeviceReport& b) { return a.id < b.id; });

    if (!latencies_.empty()) {
      r.ack_latency_min_ms = *std::min_element(latencies_.begin(), latencies_.end());
      r.ack_latency_max_ms = *std::max_element(latencies_.begin(), latencies_.end());
      double sum = 0.0;
      for (auto l : latencies_) sum += static_cast<double>(l);
      r.ack_latency_mean_ms = sum / static_cast<double>(latencies_.size());
    }
    return r;
  }

  const Scenario& s_;
  std::uint32_t horizon_;
  std::uint64_t seed_;
  RadioChannel radio_;
  EventQueue q_;
  std::vector<Type1State> gateways_;
  std::vector<Type2State> collars_;
  std::vector<std::size_t> frame_index_;
  std::vector<std::size_t> step_index_;
  std::vector<std::uint64_t> collar_notifications_;
  std::vector<std::uint64_t> gateway_notifications_rx_;
  std::vector<NotificationEvent> notifications_;
  std::vector<std::uint64_t> latencies_;
  std::uint64_t events_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t out_of_range_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace

void validate_scenario(const Scenario& s) {
  std::set<std::uint16_t> ids;
  auto fail = [](const std::string& who, const std::string& what) {
    throw InvalidArgument(who + ": " + what);
  };
  for (const auto& g : s.gateways) {
    const std::string who = "gateway " + std::to_string(g.id);
    if (!ids.insert(g.id).second) fail(who, "duplicate device id");
    if (g.frame_period_ms == 0) fail(who, "frame period must be positive");
    if (g.frames.empty()) fail(who, "no frames");
    for (const auto& f : g.frames) {
      if (std::holds_alternative<FloatTensor>(f) && !g.detector) fail(who, "image frames need a detector");
    }
  }
  for (const auto& c : s.collars) {
    const std::string who = "collar " + std::to_string(c.id);
    if (!ids.insert(c.id).second) fail(who, "duplicate device id");
    if (c.step_period_ms == 0) fail(who, "step period must be positive");
    if (c.log_interval_ms == 0) fail(who, "log interval must be positive");
    if (c.inputs.empty()) fail(who, "no inputs");
  }
  if (!(s.range_m >= 0.0)) throw InvalidArgument("radio range must be >= 0");
  if (!(s.drop_probability >= 0.0 && s.drop_probability <= 1.0)) {
    throw InvalidArgument("drop probability must be in [0, 1]");
  }
}

SimReport run_simulation(const Scenario& s, std::uint32_t horizon_ms, std::uint64_t seed) {
  validate_scenario(s);
  return Simulation(s, horizon_ms, seed).run();
}

std::string report_to_json(const SimReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["seed"] = r.seed;
  j["horizon_ms"] = r.horizon_ms;
  j["events"] = r.events;
  j["detections"] = r.detections;
  j["acks"] = r.acks;
  j["unacked_detections"] = r.unacked_detections;
  j["duplicate_acks"] = r.duplicate_acks;
  j["ack_latency_ms"] = {{"min", r.ack_latency_min_ms},
                         {"max", r.ack_latency_max_ms},
                         {"mean", r.ack_latency_mean_ms}};
  j["radio"] = {{"delivered", r.radio_delivered},
                {"out_of_range", r.radio_out_of_range},
                {"dropped", r.radio_dropped}};
  j["malformed_dropped"] = r.malformed_dropped;
  j["notifications_by_level"] = r.notifications_by_level;
  auto notes = ordered_json::array();
  for (const auto& n : r.notifications) {
    notes.push_back({{"time_ms", n.time_ms},
                     {"device", n.device_id},
                     {"level", n.level},
                     {"A", n.severity_score},
                     {"B", n.animal_count},
                     {"receivers", n.receivers}});
  }
  j["notifications"] = std::move(notes);
  auto devs = ordered_json::array();
  for (const auto& d : r.devices) {
    ordered_json dj;
    dj["id"] = d.id;
    dj["type"] = d.type;
    ordered_json counters = ordered_json::object();
    for (const auto& [k, v] : d.counters) counters[k] = v;
    dj["counters"] = std::move(counters);
    if (d.type == "collar") {
      auto log = ordered_json::array();
      for (const auto& rec : d.log) log.push_back({rec.timestamp, rec.label, rec.severity});
      dj["log"] = std::move(log);
      dj["range_summary"] = range_summary_name(d.summary);
    }
    devs.push_back(std::move(dj));
  }
  j["devices"] = std::move(devs);
  return j.dump(2) + "\n";
}

}  // namespace herd::sim
