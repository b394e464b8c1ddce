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
#include <iosfwd>
#include <string>
#include <vector>

namespace herd::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct SimulateArgs {
  std::string scenario;
  std::vector<std::uint64_t> seeds;  // empty: the scenario's own seed
  std::string out;
  std::int64_t horizon_ms = -1;      // negative: the scenario's horizon
  unsigned jobs = 1;
  bool json = false;
};

struct EvalMapArgs {
  std::string dets;
  std::string gt;
  double iou = 0.5;
  int classes = 4;
  bool json = false;
};

struct ProfileArgs {
  std::string weights;
  bool json = false;
};

struct WindowsArgs {
  std::string csv;
  std::size_t len = 250;
  std::size_t step = 25;
  bool json = false;
};

// Each command writes its report to `out` and returns normally; failures are
// reported by throwing herd::Error subclasses, mapped to exit codes by main.
void cmd_simulate(const SimulateArgs& a, std::ostream& out);
void cmd_eval_map(const EvalMapArgs& a, std::ostream& out);
void cmd_profile(const ProfileArgs& a, std::ostream& out);
void cmd_windows(const WindowsArgs& a, std::ostream& out);

// Output path for one of several seeds: "report.json" -> "report.seed7.json".
std::string seeded_output_path(const std::string& out, std::uint64_t seed);

}  // namespace herd::cli
