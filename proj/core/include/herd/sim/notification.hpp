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

namespace herd::sim {

// Alert tier computed on the gateway's message core from the collar's
// severity score A (0..7) and the number of animals B in the latest frame:
//
//   N = clamp(floor((A - 4) / 2) + floor(B / 2), 0, 3)
//
// Throws InvalidArgument for A outside 0..7 or negative B.
int notification_level(int severity_score, int animal_count);

// The formula exactly as printed, N = max(3, floor((A-4)/2) + floor(B/2)).
// It is never below 3, so "0 means no alert" and the N >= 1 broadcast trigger
// can never be honored; kept only to document the contradiction.
int notification_level_literal_max(int severity_score, int animal_count);

}  // namespace herd::sim
