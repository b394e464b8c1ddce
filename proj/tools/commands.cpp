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

#include "commands.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "herd/behavior.hpp"
#include "herd/detection_io.hpp"
#include "herd/error.hpp"
#include "herd/graph.hpp"
#include "herd/sim/simulator.hpp"
#include "herd/weight_file.hpp"

namespace herd::cli {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw FormatError(std::string(what) + " not found: " + path);
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

}  // namespace

std::string seeded_output_path(const std::string& out, std::uint64_t seed) {
  fs::path p(out);
  const auto ext = p.extension().string();
  p.replace_extension();
  return p.string() + ".seed" + std::to_string(seed) + ext;
}

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  require_file(a.scenario, "scenario file");
  const sim::Scenario scenario = sim::load_scenario(a.scenario);
  spdlog::info("scenario {}: {} gateways, {} collars", a.scenario, scenario.gateways.size(),
               scenario.collars.size());
  std::vector<std::uint64_t> seeds = a.seeds;
  if (seeds.empty()) seeds.push_back(scenario.seed);
  const std::uint32_t horizon =
      a.horizon_ms >= 0 ? static_cast<std::uint32_t>(a.horizon_ms) : scenario.horizon_ms;

  // Each run owns its own simulation state; only the result slots are shared.
  std::vector<sim::SimReport> reports(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        reports[i] = sim::run_simulation(scenario, horizon, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::clamp<unsigned>(a.jobs, 1, static_cast<unsigned>(seeds.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ordered_json summary = ordered_json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& r = reports[i];
    const std::string text = sim::report_to_json(r);
    const std::string path = seeds.size() == 1 ? a.out : seeded_output_path(a.out, seeds[i]);
    if (!path.empty()) {
      write_file(path, text);
      spdlog::info("wrote {}", path);
    }
    if (a.json) {
      summary.push_back(ordered_json::parse(text));
      continue;
    }
    out << "seed " << r.seed << ": " << r.events << " events, " << r.detections << " detections, "
        << r.acks << " acks, " << r.notifications.size() << " notifications (N1/N2/N3 = "
        << r.notifications_by_level[1] << "/" << r.notifications_by_level[2] << "/"
        << r.notifications_by_level[3] << ")";
    if (!path.empty()) out << " -> " << path;
    out << "\n";
  }
  if (a.json) out << (summary.size() == 1 ? summary[0] : summary).dump(2) << "\n";
}

void cmd_eval_map(const EvalMapArgs& a, std::ostream& out) {
  if (!(a.iou > 0.0 && a.iou <= 1.0)) throw InvalidArgument("--iou must be in (0, 1]");
  require_file(a.dets, "detections file");
  require_file(a.gt, "ground-truth file");
  const auto dets = read_detections_file(a.dets, a.classes);
  const auto gt = read_ground_truth_file(a.gt, a.classes);
  const MapResult m = evaluate_map(dets, gt, a.iou);
  if (a.json) {
    ordered_json j;
    j["iou_threshold"] = a.iou;
    j["map"] = m.map;
    auto per = ordered_json::array();
    for (const auto& [cls, ap] : m.per_class) {
      per.push_back({{"class", cls},
                     {"ap", ap.ap},
                     {"ground_truth", ap.ground_truth},
                     {"detections", ap.detections}});
    }
    j["per_class"] = std::move(per);
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto& [cls, ap] : m.per_class) {
    out << "class " << cls << "  AP " << fixed(ap.ap, 4) << "  (" << ap.ground_truth << " gt, "
        << ap.detections << " dets)\n";
  }
  out << "mAP@" << fixed(a.iou, 2) << " " << fixed(m.map, 4) << "\n";
}

void cmd_profile(const ProfileArgs& a, std::ostream& out) {
  require_file(a.weights, "weight file");
  const ModelGraph g = load_weight_file(a.weights);
  const auto int8 = profile(g, 1);
  const auto f32 = profile(g, 4);
  const auto nonzero = count_nonzero_params(g);
  if (a.json) {
    ordered_json j;
    j["layers"] = g.layers.size();
    j["flops"] = int8.flops;
    j["params"] = int8.params;
    j["nonzero_params"] = nonzero;
    j["peak_activation_bytes_int8"] = int8.peak_activation_bytes;
    j["peak_activation_bytes_float"] = f32.peak_activation_bytes;
    out << j.dump(2) << "\n";
    return;
  }
  out << "layers                 " << g.layers.size() << "\n"
      << "#FLOPs (MACs)          " << int8.flops << "\n"
      << "#Params                " << int8.params << "\n"
      << "non-zero params        " << nonzero << "\n"
      << "peak activation int8   " << int8.peak_activation_bytes << " B\n"
      << "peak activation float  " << f32.peak_activation_bytes << " B\n";
}

void cmd_windows(const WindowsArgs& a, std::ostream& out) {
  require_file(a.csv, "CSV file");
  const auto series = filter_series(read_accel_csv_file(a.csv));
  const auto windows = slide_windows(series, a.len, a.step);
  std::array<std::size_t, kBehaviorClasses> hist{};
  for (const auto& w : windows) {
    if (w.label) ++hist[static_cast<std::size_t>(*w.label)];
  }
  if (a.json) {
    ordered_json j;
    j["samples"] = series.size();
    j["window"] = a.len;
    j["step"] = a.step;
    j["windows"] = windows.size();
    ordered_json h = ordered_json::object();
    for (std::size_t k = 0; k < kBehaviorClasses; ++k) {
      h[std::string(behavior_code(static_cast<BehaviorLabel>(k)))] = hist[k];
    }
    j["labels"] = std::move(h);
    out << j.dump(2) << "\n";
    return;
  }
  out << series.size() << " samples, window " << a.len << ", step " << a.step << " -> "
      << windows.size() << " windows\n";
  for (std::size_t k = 0; k < kBehaviorClasses; ++k) {
    out << "  " << behavior_code(static_cast<BehaviorLabel>(k)) << " " << hist[k] << "\n";
  }
}

}  // namespace herd::cli
