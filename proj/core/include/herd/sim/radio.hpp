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

#include <cstdint>
#include <random>

namespace herd::sim {

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

inline constexpr double kDefaultRangeM = 200.0;

enum class Delivery : std::uint8_t { kDelivered, kOutOfRange, kDropped };

// Range-limited broadcast medium. Delivery requires distance <= range and a
// passing drop draw; the generator is consumed only for in-range receivers
// and only when the drop probability is positive, so lossless runs never
// touch it.
class RadioChannel {
 public:
  explicit RadioChannel(double range_m = kDefaultRangeM, double drop_probability = 0.0,
                        std::uint64_t seed = 0);

  Delivery deliver(const Position& from, const Position& to);

  double range() const { return range_; }
  double drop_probability() const { return drop_; }

 private:
  double range_;
  double drop_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace herd::sim
