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

#include "herd/sim/radio.hpp"

#include <cmath>

#include "herd/error.hpp"

namespace herd::sim {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

RadioChannel::RadioChannel(double range_m, double drop_probability, std::uint64_t seed)
    : range_(range_m), drop_(drop_probability), rng_(seed) {
  if (!(range_m >= 0.0) || !std::isfinite(range_m)) throw InvalidArgument("radio range must be >= 0");
  if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
    throw InvalidArgument("drop probability must be in [0, 1]");
  }
}

Delivery RadioChannel::deliver(const Position& from, const Position& to) {
  if (distance(from, to) > range_) return Delivery::kOutOfRange;
  if (drop_ > 0.0 && unit_(rng_) < drop_) return Delivery::kDropped;
  return Delivery::kDelivered;
}

}  // namespace herd::sim
