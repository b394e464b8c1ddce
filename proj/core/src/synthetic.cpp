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

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "herd/behavior.hpp"

namespace herd {
namespace {

struct Family {
  std::array<double, 3> offset;
  std::array<double, 3> amplitude;
  double freq_hz;
};

// Keep in sync with tools/train_behavior_fixture.py.
constexpr std::array<Family, kBehaviorClasses> kFamilies = {{
    {{0.0, 0.0, 1.0}, {0.02, 0.02, 0.02}, 0.2},   // RES
    {{0.1, 0.0, 0.95}, {0.30, 0.10, 0.15}, 1.5},  // MOV
    {{0.2, 0.2, 0.8}, {0.80, 0.50, 0.40}, 2.5},   // ATT
    {{0.0, 0.7, 0.7}, {0.05, 0.10, 0.05}, 0.5},   // FES
    {{0.3, 0.5, 0.75}, {0.15, 0.05, 0.10}, 1.0},  // GRZ
}};

constexpr double kOffsetJitter = 0.05;
constexpr double kNoise = 0.05;

// Fills `out` with `n` samples of one family starting at index t0.
void draw_segment(std::mt19937_64& rng, BehaviorLabel label, std::int64_t t0, std::size_t n,
                  std::vector<AccelSample>& out) {
  const Family& fam = kFamilies[static_cast<std::size_t>(label)];
  std::uniform_real_distribution<double> amp_jitter(0.8, 1.2);
  std::uniform_real_distribution<double> freq_jitter(0.9, 1.1);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> offset_noise(0.0, kOffsetJitter);
  std::normal_distribution<double> noise(0.0, kNoise);
  std::array<double, 3> off{}, amp{}, ph{};
  for (int k = 0; k < 3; ++k) {
    off[k] = fam.offset[k] + offset_noise(rng);
    amp[k] = fam.amplitude[k] * amp_jitter(rng);
    ph[k] = phase(rng);
  }
  const double f = fam.freq_hz * freq_jitter(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double sec = static_cast<double>(i) / kSampleRateHz;
    std::array<float, 3> v{};
    for (int k = 0; k < 3; ++k) {
      v[k] = static_cast<float>(off[k] + amp[k] * std::sin(2.0 * std::numbers::pi * f * sec + ph[k]) +
                                noise(rng));
    }
    out.push_back({t0 + static_cast<std::int64_t>(i), v[0], v[1], v[2]});
  }
}

}  // namespace

std::vector<AccelWindow> synthetic_behavior_windows(std::size_t per_class, std::uint64_t seed,
                                                    std::size_t window_len) {
  std::mt19937_64 rng(seed);
  std::vector<AccelWindow> out;
  out.reserve(per_class * kBehaviorClasses);
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < kBehaviorClasses; ++c) {
      AccelWindow w;
      w.label = static_cast<BehaviorLabel>(c);
      draw_segment(rng, *w.label, 0, window_len, w.samples);
      out.push_back(std::move(w));
    }
  }
  return out;
}

std::vector<LabeledSample> synthetic_behavior_series(std::size_t segments, std::size_t segment_len,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, kBehaviorClasses - 1);
  std::vector<LabeledSample> out;
  std::vector<AccelSample> buf;
  for (std::size_t s = 0; s < segments; ++s) {
    const auto label = static_cast<BehaviorLabel>(pick(rng));
    buf.clear();
    draw_segment(rng, label, static_cast<std::int64_t>(out.size()), segment_len, buf);
    for (const auto& a : buf) out.push_back({a, label});
  }
  return out;
}

}  // namespace herd
