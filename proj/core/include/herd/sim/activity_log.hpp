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
#include <span>
#include <string_view>
#include <vector>

namespace herd::sim {

struct ActivityRecord {
  std::uint32_t timestamp = 0;  // ms
  std::uint8_t label = 0;       // fused label, 0..7
  std::uint8_t severity = 0;    // 0 green, 1 yellow, 2 red

  friend bool operator==(const ActivityRecord&, const ActivityRecord&) = default;
};

inline constexpr std::size_t kActivityRecordBytes = 6;
inline constexpr std::size_t kActivityLogCapacity = 100;
inline constexpr std::uint32_t kLogIntervalMs = 5 * 60 * 1000;

// Fixed-capacity FIFO of activity records; the oldest record is evicted when
// a push would exceed the capacity.
class ActivityLog {
 public:
  explicit ActivityLog(std::size_t capacity = kActivityLogCapacity);

  void push(const ActivityRecord& r);
  std::size_t size() const { return records_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return records_.empty(); }
  // Oldest first.
  std::vector<ActivityRecord> records() const { return {records_.begin(), records_.end()}; }

  // "HLOG", u8 version, u8 count, then count x (u32 timestamp, u8 label,
  // u8 severity), little-endian.
  std::vector<std::uint8_t> serialize() const;
  static ActivityLog deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const ActivityLog&, const ActivityLog&) = default;

 private:
  std::size_t capacity_;
  std::deque<ActivityRecord> records_;
};

// Appends `rec` (validated) and returns the log for chaining.
ActivityLog& log_activity(ActivityLog& log, const ActivityRecord& rec);

enum class RangeSummary : std::uint8_t { kMixed = 0, kConfined = 1, kFreeRanging = 2 };
std::string_view range_summary_name(RangeSummary s);

struct HistoryQuery {
  std::vector<ActivityRecord> records;  // chronological
  RangeSummary summary = RangeSummary::kMixed;
};

// Records with timestamp >= since. The summary is CONFINED when more than half
// of them are stanchion feeding (label 2) and none is grazing (label 3),
// otherwise FREE_RANGING when moving or grazing (labels 1, 3) exceed half,
// otherwise MIXED. An empty selection is MIXED.
HistoryQuery query_history(const ActivityLog& log, std::uint32_t since);

}  // namespace herd::sim
