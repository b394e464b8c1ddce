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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herd/graph.hpp"
#include "herd/tensor.hpp"

namespace herd {

enum class BehaviorLabel : std::uint8_t {
  kResting = 0,         // RES, resting while standing
  kMoving = 1,          // MOV
  kAttacking = 2,       // ATT
  kFeedingStanchion = 3,  // FES
  kGrazing = 4,         // GRZ
};

inline constexpr std::size_t kBehaviorClasses = 5;
inline constexpr std::size_t kSampleRateHz = 25;
inline constexpr std::size_t kDefaultWindow = 250;  // 10 s
inline constexpr std::size_t kDefaultStep = 25;     // 1 s

std::string_view behavior_code(BehaviorLabel label);
std::optional<BehaviorLabel> parse_behavior(std::string_view code);

// One tri-axial reading in g. t is the sample index at 25 Hz.
struct AccelSample {
  std::int64_t t = 0;
  float ax = 0.0f;
  float ay = 0.0f;
  float az = 0.0f;

  friend bool operator==(const AccelSample&, const AccelSample&) = default;
};

struct LabeledSample {
  AccelSample sample;
  BehaviorLabel label = BehaviorLabel::kResting;
};

struct AccelWindow {
  std::vector<AccelSample> samples;
  std::optional<BehaviorLabel> label;

  std::size_t size() const { return samples.size(); }
  // [length, 3] tensor of (ax, ay, az) rows.
  FloatTensor to_tensor() const;

  friend bool operator==(const AccelWindow&, const AccelWindow&) = default;
};

// Pre-windowing cleanup stage. Currently the identity.
std::vector<LabeledSample> filter_series(std::vector<LabeledSample> series);

std::size_t window_count(std::size_t length, std::size_t window_len, std::size_t step);

// Windows start at 0, step, 2*step, ... and are labeled by majority; a tie is
// resolved by the label of the center sample (index window_len / 2) when it
// is among the tied labels, otherwise by the lowest tied label code. The
// series must have contiguous sample indices.
std::vector<AccelWindow> slide_windows(std::span<const LabeledSample> series,
                                       std::size_t window_len, std::size_t step);

// Augmentations keep the window length, its sample indices and its label;
// only the acceleration values move.
AccelWindow augment_reverse(const AccelWindow& w);
// Tiles samples [start, start + span) over the whole window.
AccelWindow augment_loop(const AccelWindow& w, std::size_t start, std::size_t span);
// Adds zero-mean Gaussian noise with standard deviation sigma to every axis.
AccelWindow augment_gaussian_noise(const AccelWindow& w, double sigma, std::uint64_t seed);

// Runs a behavior graph on one window and returns a probability per label.
// A softmax is applied unless the graph already ends in one.
std::array<double, kBehaviorClasses> classify_window(const ModelGraph& g, const AccelWindow& w);

// CSV with header `t,ax,ay,az,label`; label is one of RES/MOV/ATT/FES/GRZ.
// Malformed rows raise FormatError with the line number.
std::vector<LabeledSample> read_accel_csv(std::istream& in, const std::string& source);
std::vector<LabeledSample> read_accel_csv_file(const std::filesystem::path& path);
void write_accel_csv(std::ostream& out, std::span<const LabeledSample> series);

// Synthetic stand-in for collar data: each behavior is a family of
// per-axis sinusoids (offset + amplitude * sin(2 pi f t + phase)) with
// jittered amplitude, frequency, phase and offset plus white noise. The
// family table is documented in docs/synthetic_behavior.md and mirrored by
// tools/train_behavior_fixture.py.
std::vector<AccelWindow> synthetic_behavior_windows(std::size_t per_class, std::uint64_t seed,
                                                    std::size_t window_len = kDefaultWindow);
// A labeled continuous series made of `segments` blocks of `segment_len`
// samples, each block drawn from one behavior family.
std::vector<LabeledSample> synthetic_behavior_series(std::size_t segments, std::size_t segment_len,
                                                     std::uint64_t seed);

}  // namespace herd
