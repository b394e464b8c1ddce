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

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "herd/behavior.hpp"
#include "herd/error.hpp"

namespace herd {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<LabeledSample> read_accel_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> FormatError {
    return FormatError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  bool header_seen = false;
  std::vector<LabeledSample> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) f.push_back(trim(field));
    if (!header_seen) {
      if (f != std::vector<std::string>{"t", "ax", "ay", "az", "label"}) {
        throw fail("expected header 't,ax,ay,az,label'");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 5) throw fail("expected 5 fields, got " + std::to_string(f.size()));
    LabeledSample s;
    {
      const auto* b = f[0].data();
      const auto* e = b + f[0].size();
      auto [p, ec] = std::from_chars(b, e, s.sample.t);
      if (ec != std::errc() || p != e) throw fail("bad sample index '" + f[0] + "'");
    }
    float* axes[] = {&s.sample.ax, &s.sample.ay, &s.sample.az};
    for (int k = 0; k < 3; ++k) {
      std::size_t used = 0;
      float v = 0.0f;
      try {
        v = std::stof(f[1 + k], &used);
      } catch (const std::exception&) {
        throw fail("bad acceleration '" + f[1 + k] + "'");
      }
      if (used != f[1 + k].size() || !std::isfinite(v)) {
        throw fail("bad acceleration '" + f[1 + k] + "'");
      }
      *axes[k] = v;
    }
    const auto label = parse_behavior(f[4]);
    if (!label) throw fail("unknown label '" + f[4] + "'");
    s.label = *label;
    out.push_back(s);
  }
  if (!header_seen) throw FormatError(source + ": empty file, expected header 't,ax,ay,az,label'");
  return out;
}

std::vector<LabeledSample> read_accel_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open CSV file " + path.string());
  return read_accel_csv(in, path.string());
}

void write_accel_csv(std::ostream& out, std::span<const LabeledSample> series) {
  out << "t,ax,ay,az,label\n";
  for (const auto& s : series) {
    out << s.sample.t << ',' << s.sample.ax << ',' << s.sample.ay << ',' << s.sample.az << ','
        << behavior_code(s.label) << '\n';
  }
}

}  // namespace herd
