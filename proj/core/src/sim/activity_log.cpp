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

#include "herd/sim/activity_log.hpp"

#include <algorithm>
#include <string>

#include "herd/bytes.hpp"
#include "herd/error.hpp"

namespace herd::sim {
namespace {

constexpr std::uint8_t kLogVersion = 1;

void check(const ActivityRecord& r) {
  if (r.label > 7) throw InvalidArgument("activity label above 7");
  if (r.severity > 2) throw InvalidArgument("severity above 2");
}

}  // namespace

ActivityLog::ActivityLog(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0 || capacity > 255) throw InvalidArgument("log capacity must be in [1, 255]");
}

void ActivityLog::push(const ActivityRecord& r) {
  check(r);
  if (records_.size() == capacity_) records_.pop_front();
  records_.push_back(r);
}

std::vector<std::uint8_t> ActivityLog::serialize() const {
  ByteWriter w;
  w.bytes("HLOG");
  w.u8(kLogVersion);
  w.u8(static_cast<std::uint8_t>(records_.size()));
  for (const auto& r : records_) {
    w.u32(r.timestamp);
    w.u8(r.label);
    w.u8(r.severity);
  }
  return w.take();
}

ActivityLog ActivityLog::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.bytes(4) != "HLOG") throw FormatError("bad activity log magic");
  if (const auto v = r.u8(); v != kLogVersion) {
    throw FormatError("unsupported activity log version " + std::to_string(v));
  }
  const std::size_t n = r.u8();
  if (n > kActivityLogCapacity) throw FormatError("activity log holds more than 100 records");
  ActivityLog log;
  for (std::size_t i = 0; i < n; ++i) {
    ActivityRecord rec;
    rec.timestamp = r.u32();
    rec.label = r.u8();
    rec.severity = r.u8();
    try {
      log.push(rec);
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string("record ") + std::to_string(i) + ": " + e.what());
    }
  }
  if (!r.done()) throw FormatError("trailing bytes after activity log");
  return log;
}

ActivityLog& log_activity(ActivityLog& log, const ActivityRecord& rec) {
  log.push(rec);
  return log;
}

std::string_view range_summary_name(RangeSummary s) {
  switch (s) {
    case RangeSummary::kMixed: return "MIXED";
    case RangeSummary::kConfined: return "CONFINED";
    case RangeSummary::kFreeRanging: return "FREE_RANGING";
  }
  return "?";
}

HistoryQuery query_history(const ActivityLog& log, std::uint32_t since) {
  HistoryQuery q;
  for (const auto& r : log.records()) {
    if (r.timestamp >= since) q.records.push_back(r);
  }
  const std::size_t n = q.records.size();
  if (n == 0) return q;
  const auto count = [&](auto pred) {
    return static_cast<std::size_t>(std::count_if(q.records.begin(), q.records.end(), pred));
  };
  const std::size_t stanchion = count([](const ActivityRecord& r) { return r.label == 2; });
  const std::size_t grazing = count([](const ActivityRecord& r) { return r.label == 3; });
  const std::size_t roaming = count([](const ActivityRecord& r) { return r.label == 1 || r.label == 3; });
  if (2 * stanchion > n && grazing == 0) {
    q.summary = RangeSummary::kConfined;
  } else if (2 * roaming > n) {
    q.summary = RangeSummary::kFreeRanging;
  }
  return q;
}

}  // namespace herd::sim
