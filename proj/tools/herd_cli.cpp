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

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "herd/error.hpp"

namespace {

// HERD_LOG=trace|debug|info|warn|error|off, default warn. Logs go to stderr so
// stdout stays machine-readable under --json.
void setup_logging() {
  auto logger = spdlog::stderr_color_mt("herd");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("HERD_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("unknown HERD_LOG level '{}', keeping warn", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace herd::cli;
  setup_logging();

  CLI::App app{"herd: livestock monitoring inference, detection metrics and fleet simulation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a fleet scenario and write its report");
  simulate->add_option("--scenario", sim.scenario, "scenario JSON file")->required();
  simulate->add_option("--seed", sim.seeds,
                       "simulation seed; repeat for several runs (default: the scenario's seed)");
  simulate->add_option("--out", sim.out, "report path; with several seeds, NAME.seedN.EXT");
  simulate->add_option("--horizon-ms", sim.horizon_ms, "override the scenario horizon");
  simulate->add_option("--jobs", sim.jobs, "parallel runs when several seeds are given")
      ->check(CLI::Range(1u, 256u));
  simulate->add_flag("--json", sim.json, "print the report(s) as JSON");

  EvalMapArgs map;
  auto* eval = app.add_subcommand("eval-map", "per-class AP and mAP of a detection file");
  eval->add_option("--dets", map.dets, "detections file")->required();
  eval->add_option("--gt", map.gt, "ground-truth file")->required();
  eval->add_option("--iou", map.iou, "IoU threshold for a true positive")->capture_default_str();
  eval->add_option("--classes", map.classes, "number of classes")
      ->capture_default_str()
      ->check(CLI::Range(1, 1000));
  eval->add_flag("--json", map.json, "print JSON");

  ProfileArgs prof;
  auto* profile = app.add_subcommand("profile", "FLOPs, params and peak activation of a weight file");
  profile->add_option("--weights", prof.weights, "weight file")->required();
  profile->add_flag("--json", prof.json, "print JSON");

  WindowsArgs win;
  auto* windows = app.add_subcommand("windows", "slide windows over an accelerometer CSV");
  windows->add_option("--csv", win.csv, "accelerometer CSV")->required();
  windows->add_option("--len", win.len, "window length in samples")->capture_default_str()
      ->check(CLI::PositiveNumber);
  windows->add_option("--step", win.step, "step in samples")->capture_default_str()
      ->check(CLI::PositiveNumber);
  windows->add_flag("--json", win.json, "print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) cmd_simulate(sim, std::cout);
    if (*eval) cmd_eval_map(map, std::cout);
    if (*profile) cmd_profile(prof, std::cout);
    if (*windows) cmd_windows(win, std::cout);
  } catch (const herd::FormatError& e) {
    std::cerr << "herd: " << e.what() << "\n";
    return kExitUsage;
  } catch (const herd::InvalidArgument& e) {
    std::cerr << "herd: " << e.what() << "\n";
    return kExitUsage;
  } catch (const herd::ShapeError& e) {
    std::cerr << "herd: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "herd: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
