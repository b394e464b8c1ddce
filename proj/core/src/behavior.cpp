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

#include "herd/behavior.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "herd/error.hpp"

namespace herd {

namespace {
constexpr std::array<std::string_view, kBehaviorClasses> kCodes = {"RES", "MOV", "ATT", "FES", "GRZ"};
}

std::string_view behavior_code(BehaviorLabel label) {
  return kCodes.at(static_cast<std::size_t>(label));
}

std::optional<BehaviorLabel> parse_behavior(std::string_view code) {
  for (std::size_t i = 0; i < kCodes.size(); ++i) {
    if (kCodes[i] == code) return static_cast<BehaviorLabel>(i);
  }
  return std::nullopt;
}

FloatTensor AccelWindow::to_tensor() const {
  FloatTensor t({samples.size(), 3});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    t[3 * i] = samples[i].ax;
    t[3 * i + 1] = samples[i].ay;
    t[3 * i + 2] = samples[i].az;
  }
  return t;
}

std::vector<LabeledSample> filter_series(std::vector<LabeledSample> series) { return series; }

std::size_t window_count(std::size_t length, std::size_t window_len, std::size_t step) {
  if (window_len == 0 || step == 0) throw InvalidArgument("window length and step must be >= 1");
  if (length < window_len) {
    throw InvalidArgument("series of " + std::to_string(length) +
                          " samples is shorter than the window (" + std::to_string(window_len) + ")");
  }
  return (length - window_len) / step + 1;
}

std::vector<AccelWindow> slide_windows(std::span<const LabeledSample> series,
                                       std::size_t window_len, std::size_t step) {
  const std::size_t n = window_count(series.size(), window_len, step);
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].sample.t != series[i - 1].sample.t + 1) {
      throw InvalidArgument("sample indices are not contiguous at t=" +
                            std::to_string(series[i].sample.t));
    }
  }
  std::vector<AccelWindow> out;
  out.reserve(n);
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t start = w * step;
    AccelWindow win;
    win.samples.reserve(window_len);
    std::array<std::size_t, kBehaviorClasses> votes{};
    for (std::size_t i = start; i < start + window_len; ++i) {
      win.samples.push_back(series[i].sample);
      ++votes[static_cast<std::size_t>(series[i].label)];
    }
    const std::size_t top = *std::max_element(votes.begin(), votes.end());
    const auto center = static_cast<std::size_t>(series[start + window_len / 2].label);
    std::size_t pick = center;
    if (votes[center] != top) {
      pick = static_cast<std::size_t>(std::find(votes.begin(), votes.end(), top) - votes.begin());
    }
    win.label = static_cast<BehaviorLabel>(pick);
    out.push_back(std::move(win));
  }
  return out;
}

namespace {

void copy_values(AccelSample& dst, const AccelSample& src) {
  dst.ax = src.ax;
  dst.ay = src.ay;
  dst.az = src.az;
}

}  // namespace

AccelWindow augment_reverse(const AccelWindow& w) {
  AccelWindow out = w;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) copy_values(out.samples[i], w.samples[n - 1 - i]);
  return out;
}

AccelWindow augment_loop(const AccelWindow& w, std::size_t start, std::size_t span) {
  if (span == 0) throw InvalidArgument("loop span must be non-empty");
  if (start > w.size() || span > w.size() - start) {
    throw InvalidArgument("loop span [" + std::to_string(start) + ", " +
                          std::to_string(start + span) + ") exceeds window of " +
                          std::to_string(w.size()));
  }
  AccelWindow out = w;
  for (std::size_t i = 0; i < w.size(); ++i) copy_values(out.samples[i], w.samples[start + i % span]);
  return out;
}

AccelWindow augment_gaussian_noise(const AccelWindow& w, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("noise sigma must be >= 0");
  AccelWindow out = w;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& s : out.samples) {
    s.ax = static_cast<float>(s.ax + noise(rng));
    s.ay = static_cast<float>(s.ay + noise(rng));
    s.az = static_cast<float>(s.az + noise(rng));
  }
  return out;
}

std::array<double, kBehaviorClasses> classify_window(const ModelGraph& g, const AccelWindow& w) {
  const FloatTensor y = forward_float(g, w.to_tensor());
  if (y.size() != kBehaviorClasses) {
    throw ShapeError("behavior graph emits " + std::to_string(y.size()) + " values, expected " +
                     std::to_string(kBehaviorClasses));
  }
  std::array<double, kBehaviorClasses> p{};
  const bool has_softmax = g.layers.back().kind == LayerKind::kSoftmax;
  if (has_softmax) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = y[i];
  } else {
    const double m = *std::max_element(y.data().begin(), y.data().end());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(y[i] - m);
  }
  double sum = 0.0;
  for (double v : p) sum += v;
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace herd
