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

#include "herd/sim/notification.hpp"

#include <algorithm>
#include <string>

#include "herd/error.hpp"

namespace herd::sim {
namespace {

// Integer division rounding toward negative infinity; (A - 4) / 2 is negative
// for A < 4 and C++ '/' truncates toward zero.
int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int raw_level(int a, int b) {
  if (a < 0 || a > 7) throw InvalidArgument("severity score must be in [0, 7], got " + std::to_string(a));
  if (b < 0) throw InvalidArgument("animal count must be non-negative, got " + std::to_string(b));
  return floor_div(a - 4, 2) + floor_div(b, 2);
}

}  // namespace

int notification_level(int severity_score, int animal_count) {
  return std::clamp(raw_level(severity_score, animal_count), 0, 3);
}

int notification_level_literal_max(int severity_score, int animal_count) {
  return std::max(3, raw_level(severity_score, animal_count));
}

}  // namespace herd::sim
