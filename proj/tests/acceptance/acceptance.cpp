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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every line passes. Thresholds are fixed here; nothing is tuned per run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <exception>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "herd/behavior.hpp"
#include "herd/detection.hpp"
#include "herd/error.hpp"
#include "herd/fusion.hpp"
#include "herd/graph.hpp"
#include "herd/model_zoo.hpp"
#include "herd/sim/activity_log.hpp"
#include "herd/sim/notification.hpp"
#include "herd/sim/simulator.hpp"
#include "herd/weight_file.hpp"
#include "oracles.hpp"
#include "random_graphs.hpp"

namespace {

using namespace herd;
using Clock = std::chrono::steady_clock;

const std::filesystem::path kFixtures{HERD_FIXTURE_DIR};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome fused_label_table() {
  Outcome o;
  const auto t0 = Clock::now();
  constexpr int table[3][5] = {{0, 1, 6, 2, 3}, {0, 1, 6, 2, 3}, {4, 7, 7, 2, 5}};
  int cells = 0;
  for (int e = 0; e < 3; ++e) {
    for (int b = 0; b < 5; ++b) {
      const int got = static_cast<int>(map_labels_table(static_cast<EnvLabel>(e), static_cast<BehaviorLabel>(b)));
      o.require(got == table[e][b], fmt("cell (%d,%d) = %d, want %d", e, b, got, table[e][b]));
      cells += got == table[e][b];
    }
  }
  for (int f = 0; f < 8; ++f) {
    const auto want = f <= 3 ? Severity::kGreen : f <= 5 ? Severity::kYellow : Severity::kRed;
    o.require(severity_of(static_cast<FusedLabel>(f)) == want, fmt("severity of %d", f));
  }
  const double s = seconds_since(t0);
  o.require(s < 1.0, fmt("took %.3f s", s));
  if (o.pass) o.detail = fmt("15/15 cells, severity partition 0-3/4-5/6-7, %.3f s", s);
  return o;
}

Outcome fusion_head_fit() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto data = table_dataset();
  const auto a = fit_fusion_head(data, {.epochs = 2000, .seed = 0});
  const auto b = fit_fusion_head(data, {.epochs = 2000, .seed = 0});
  o.require(a.correct == 15, fmt("%zu/15 correct", a.correct));
  o.require(a.first_perfect_epoch >= 0 && a.first_perfect_epoch <= 2000, "never reached 15/15");
  o.require(a.head == b.head && a.loss_history == b.loss_history, "fit is not deterministic");
  const double s = seconds_since(t0);
  o.require(s < 10.0, fmt("took %.3f s", s));
  if (o.pass) o.detail = fmt("15/15 from epoch %d, deterministic, %.3f s", a.first_perfect_epoch, s);
  return o;
}

Outcome quantization() {
  Outcome o;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> bound(-50.0, 50.0);
  std::size_t checked = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    double lo = bound(rng), hi = bound(rng);
    if (lo > hi) std::swap(lo, hi);
    const auto p = quant_params_for_range(lo, hi);
    std::uniform_real_distribution<double> in(std::min(lo, 0.0), std::max(hi, 0.0));
    for (int i = 0; i < 2000; ++i, ++checked) {
      const double x = in(rng);
      const double err = std::abs(dequantize_value(quantize_value(x, p), p) - x);
      worst = std::max(worst, err / p.scale);
      o.require(err <= p.scale / 2 + 1e-12 * std::abs(x), fmt("x=%.9g error %.3g > S/2", x, err));
    }
  }
  o.require(quantize_value(0.0, {0.5, 0}) == 0, "0 -> 0");
  o.require(quantize_value(2.5, {0.5, 10}) == 15, "2.5, S=0.5, Z=10 -> 15");
  o.require(quantize_value(1e6, {0.5, 0}) == 127, "saturation -> 127");
  if (o.pass) o.detail = fmt("%zu values, worst error %.4f S; goldens exact", checked, worst);
  return o;
}

Outcome int8_fidelity() {
  Outcome o;
  constexpr int kGraphs = 20;
  constexpr std::size_t kInputs = 1000;
  double worst = 1.0, mean = 0.0;
  std::uint64_t worst_seed = 0;
  for (std::uint64_t seed = 0; seed < kGraphs; ++seed) {
    const auto g = testing::random_small_graph(seed);
    const auto cg = calibrate(g, testing::random_inputs(g.input_shape, 256, seed + 1000));
    std::size_t agree = 0;
    for (const auto& x : testing::random_inputs(g.input_shape, kInputs, seed + 2000)) {
      const auto f = testing::argmax(forward_float(cg, x));
      const auto q = testing::argmax(forward_int8(cg, quantize_tensor(x, *cg.input_quant)));
      agree += f == q;
    }
    const double rate = static_cast<double>(agree) / kInputs;
    mean += rate / kGraphs;
    if (rate < worst) {
      worst = rate;
      worst_seed = seed;
    }
  }
  o.require(worst >= 0.99, fmt("worst graph (seed %llu) agrees on %.1f%%, mean %.2f%% over %d graphs x %zu inputs",
                               static_cast<unsigned long long>(worst_seed), 100 * worst, 100 * mean, kGraphs, kInputs));
  if (o.pass) o.detail = fmt("worst %.1f%%, mean %.2f%% over %d graphs x %zu inputs", 100 * worst, 100 * mean, kGraphs, kInputs);
  return o;
}

Outcome detection_oracles() {
  Outcome o;
  std::uint64_t st = 4242;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(testing::uniform01(st) * 51);
    const auto dets = testing::random_detections(st, n, 3);
    const double thr = 0.2 + 0.6 * testing::uniform01(st);
    o.require(nms(dets, thr) == testing::brute_force_nms(dets, thr), fmt("NMS set %d differs", trial));
  }
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = testing::random_ap_fixture(st);
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, std::abs(average_precision(f.dets, f.gt, c).ap -
                                       testing::brute_force_ap(f.dets, f.gt, c, 0.5)));
    }
    worst = std::max(worst, std::abs(mean_average_precision(f.dets, f.gt).map -
                                     testing::brute_force_map(f.dets, f.gt, 0.5)));
  }
  o.require(worst <= 1e-9, fmt("AP differs from oracle by %.3g", worst));
  const BoundingBox a{0.1, 0.1, 0.3, 0.3};
  o.require(iou(a, a) == 1.0, "IoU of identical boxes");
  o.require(iou(a, {0.5, 0.5, 0.7, 0.7}) == 0.0, "IoU of disjoint boxes");
  o.require(iou({0.0, 0.0, 0.5, 0.5}, {0.25, 0.0, 0.75, 0.5}) == 1.0 / 3.0, "IoU of half-offset squares");
  if (o.pass) o.detail = fmt("1000 NMS sets, 100 AP fixtures (max diff %.1e), IoU goldens", worst);
  return o;
}

Outcome yolo_objective() {
  Outcome o;
  // Exact match: dyadic boxes so the float grid holds them exactly.
  const GroundTruth gt{{1, {0.125, 0.125, 0.375, 0.5}}, {3, {0.5, 0.5, 1.0, 0.75}}};
  auto exact = YoloTensor::zeros(4, 2, 4);
  for (const auto& g : gt) {
    const double cx = 0.5 * (g.box.x_min + g.box.x_max), cy = 0.5 * (g.box.y_min + g.box.y_max);
    const auto col = static_cast<std::uint32_t>(cx * 4), row = static_cast<std::uint32_t>(cy * 4);
    float* b = exact.box(row, col, 0);
    b[0] = static_cast<float>(cx * 4 - col);
    b[1] = static_cast<float>(cy * 4 - row);
    b[2] = static_cast<float>(g.box.width());
    b[3] = static_cast<float>(g.box.height());
    b[4] = 1.0f;
    exact.class_probs(row, col)[g.class_id] = 1.0f;
  }
  o.require(yolo_loss(exact, gt) == 0.0, fmt("exact-match loss %.3g", yolo_loss(exact, gt)));

  std::uint64_t st = 606;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto B = 1 + static_cast<std::uint32_t>(testing::uniform01(st) * 3);
    const auto C = 1 + static_cast<std::uint32_t>(testing::uniform01(st) * 4);
    auto pred = YoloTensor::zeros(1, B, C);
    for (auto& v : pred.data) v = static_cast<float>(testing::uniform01(st) * 1.2 - 0.1);
    const GroundTruth one{{static_cast<int>(testing::uniform01(st) * C), testing::random_box(st)}};
    const double want = testing::scalar_yolo_loss(pred, one, 5.0, 0.5);
    worst = std::max(worst, std::abs(yolo_loss(pred, one) - want) / std::max(1e-12, std::abs(want)));
  }
  o.require(worst <= 1e-6, fmt("relative difference %.3g", worst));

  const YoloLossWeights w;
  o.require(w.coord == 5.0 && w.noobj == 0.5, "default weights");
  auto noobj = YoloTensor::zeros(2, 1, 1);
  noobj.box(0, 0, 0)[4] = 1.0f;
  o.require(yolo_loss(noobj, {}) == 0.5, "lambda_noobj not applied");
  auto shifted = YoloTensor::zeros(1, 1, 1);
  const GroundTruth centred{{0, {0.25, 0.25, 0.75, 0.75}}};
  float* b = shifted.box(0, 0, 0);
  b[0] = 0.6f;
  b[1] = 0.5f;
  b[2] = b[3] = 0.5f;
  shifted.class_probs(0, 0)[0] = 1.0f;
  b[4] = static_cast<float>(iou({0.35, 0.25, 0.85, 0.75}, centred[0].box));
  o.require(std::abs(yolo_loss(shifted, centred) - 5.0 * 0.01) < 1e-6, "lambda_coord not applied");
  if (o.pass) o.detail = fmt("exact match 0, 100 instances within %.1e relative, weights 5 / 0.5", worst);
  return o;
}

Outcome notification_rule() {
  Outcome o;
  for (int a = 0; a <= 7; ++a) {
    for (int b = 0; b <= 20; ++b) {
      const int n = sim::notification_level(a, b);
      o.require(n >= 0 && n <= 3, fmt("N(%d,%d) = %d", a, b, n));
      if (a < 7) o.require(n <= sim::notification_level(a + 1, b), fmt("not monotone in A at (%d,%d)", a, b));
      o.require(n <= sim::notification_level(a, b + 1), fmt("not monotone in B at (%d,%d)", a, b));
      o.require(sim::notification_level_literal_max(a, b) >= 3, "literal reading below 3");
    }
  }
  o.require(sim::notification_level(0, 0) == 0, "(0,0) -> 0");
  o.require(sim::notification_level(7, 4) == 3, "(7,4) -> 3");
  o.require(sim::notification_level(5, 2) == 1, "(5,2) -> 1");
  o.require(sim::notification_level_literal_max(0, 0) == 3, "literal (0,0) -> 3");
  if (o.pass) o.detail = "N in [0,3], monotone, goldens exact; literal max reading never below 3";
  return o;
}

Outcome windowing() {
  Outcome o;
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<std::size_t> len_d(1, 5000), win_d(1, 500), step_d(1, 200);
  for (int i = 0; i < 1000; ++i) {
    const auto len = len_d(rng), win = win_d(rng), step = step_d(rng);
    if (len < win) {
      bool threw = false;
      try {
        window_count(len, win, step);
      } catch (const InvalidArgument&) {
        threw = true;
      }
      o.require(threw, fmt("(%zu,%zu,%zu) shorter than the window did not raise", len, win, step));
      continue;
    }
    o.require(window_count(len, win, step) == (len - win) / step + 1, fmt("(%zu,%zu,%zu)", len, win, step));
  }
  const auto series = read_accel_csv_file(kFixtures / "accel_500.csv");
  const auto windows = slide_windows(series, 250, 25);
  o.require(window_count(500, 250, 25) == 11 && windows.size() == 11,
            fmt("500/250/25 gave %zu windows", windows.size()));
  if (o.pass) o.detail = "1000 random (len, window, step) triples; 500/250/25 -> 11";
  return o;
}

Outcome activity_log() {
  Outcome o;
  sim::ActivityLog log;
  for (std::uint32_t i = 0; i < 101; ++i) log.push({i, static_cast<std::uint8_t>(i % 8), 0});
  o.require(log.size() == 100, fmt("size %zu after 101 inserts", log.size()));
  o.require(log.records().front().timestamp == 1, "oldest record not evicted");
  const auto bytes = log.serialize();
  o.require(bytes.size() < 10 * 1024, fmt("serialized %zu bytes", bytes.size()));
  std::mt19937_64 rng(77);
  for (int seq = 0; seq < 10000 && o.pass; ++seq) {
    sim::ActivityLog l(1 + rng() % 100);
    std::deque<sim::ActivityRecord> model;
    const std::size_t n = rng() % 150;
    for (std::size_t i = 0; i < n; ++i) {
      const sim::ActivityRecord r{static_cast<std::uint32_t>(rng()), static_cast<std::uint8_t>(rng() % 8), 0};
      l.push(r);
      model.push_back(r);
      if (model.size() > l.capacity()) model.pop_front();
    }
    o.require(l.records() == std::vector<sim::ActivityRecord>(model.begin(), model.end()),
              fmt("FIFO order broken in sequence %d", seq));
  }
  if (o.pass) o.detail = fmt("101 -> 100, full log %zu bytes, 10^4 random sequences in FIFO order", bytes.size());
  return o;
}

Outcome simulator() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto near = sim::load_scenario(kFixtures / "scenario_escape.json");
  const auto far = sim::load_scenario(kFixtures / "scenario_escape_far.json");
  const auto r1 = sim::run_simulation(near);
  const auto r2 = sim::run_simulation(near);
  o.require(sim::report_to_json(r1) == sim::report_to_json(r2), "reports differ between identical runs");
  o.require(r1.detections > 0 && r1.acks == r1.detections && r1.unacked_detections == 0 && r1.duplicate_acks == 0,
            fmt("%llu detections, %llu acks, %llu unacked, %llu duplicates",
                static_cast<unsigned long long>(r1.detections), static_cast<unsigned long long>(r1.acks),
                static_cast<unsigned long long>(r1.unacked_detections),
                static_cast<unsigned long long>(r1.duplicate_acks)));
  const bool n3 = std::any_of(r1.notifications.begin(), r1.notifications.end(),
                              [](const sim::NotificationEvent& e) { return e.level == 3; });
  o.require(n3, "no N=3 notification in the 50 m scenario");
  const auto rf = sim::run_simulation(far);
  o.require(rf.notifications.empty(), fmt("%zu notifications in the 500 m scenario", rf.notifications.size()));
  o.require(rf.acks == rf.detections && rf.unacked_detections == 0 && rf.duplicate_acks == 0, "500 m ACK accounting");
  const double s = seconds_since(t0);
  o.require(s < 5.0, fmt("took %.3f s", s));
  if (o.pass) {
    o.detail = fmt("identical reports, %llu/%llu ACKed once, %zu x N=3 at 50 m, none at 500 m, %.3f s",
                   static_cast<unsigned long long>(r1.acks), static_cast<unsigned long long>(r1.detections),
                   r1.notifications.size(), s);
  }
  return o;
}

Outcome profiling() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = testing::random_small_graph(seed);
    const auto oracle = testing::instrumented_counts(g);
    o.require(count_flops(g) == oracle.macs, fmt("FLOPs differ on graph %llu", static_cast<unsigned long long>(seed)));
    o.require(count_params(g) == oracle.params, fmt("params differ on graph %llu", static_cast<unsigned long long>(seed)));
  }
  const auto selected = count_params(zoo::cnn_lstm(zoo::behavior_config(), 0));
  const double off = std::abs(static_cast<double>(selected) - 186000.0) / 186000.0;
  o.require(off <= 0.05, fmt("selected model has %llu params (%.1f%% off)", static_cast<unsigned long long>(selected), 100 * off));
  const auto unpruned = zoo::cnn_lstm(zoo::behavior_config_unpruned(), 0);
  const auto pruned = prune_magnitude(unpruned, 0.58, 5);
  const auto nonzero = count_nonzero_params(pruned);
  o.require(count_params(unpruned) >= 437000, "unpruned configuration is not ~0.437M");
  o.require(nonzero <= 186000, fmt("pruned model keeps %llu non-zero", static_cast<unsigned long long>(nonzero)));
  if (o.pass) {
    o.detail = fmt("50 graphs match oracle; selected %llu params (%.1f%% off 0.186M); %llu -> %llu non-zero",
                   static_cast<unsigned long long>(selected), 100 * off,
                   static_cast<unsigned long long>(count_params(unpruned)), static_cast<unsigned long long>(nonzero));
  }
  return o;
}

Outcome behavior_pipeline() {
  Outcome o;
  const auto windows = synthetic_behavior_windows(100, 9001);
  for (std::size_t i = 0; i < 50; ++i) {
    const auto& w = windows[i];
    o.require(augment_reverse(augment_reverse(w)) == w, "reverse is not an involution");
    o.require(augment_loop(w, 0, w.size()) == w, "full-span loop is not the identity");
    o.require(augment_gaussian_noise(w, 0.0, i) == w, "zero noise is not the identity");
    o.require(augment_reverse(w).label == w.label && augment_loop(w, 3, 50).label == w.label,
              "augmentation changed the label");
  }
  // Noise statistics: mean ~0 and standard deviation ~sigma over 750 draws
  // per window, pooled over 20 windows.
  double sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  constexpr double kSigma = 0.05;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto noisy = augment_gaussian_noise(windows[i], kSigma, 100 + i);
    for (std::size_t k = 0; k < windows[i].size(); ++k, n += 3) {
      for (double d : {noisy.samples[k].ax - windows[i].samples[k].ax, noisy.samples[k].ay - windows[i].samples[k].ay,
                       noisy.samples[k].az - windows[i].samples[k].az}) {
        sum += d;
        sq += d * d;
      }
    }
  }
  const double mean = sum / static_cast<double>(n);
  const double sd = std::sqrt(sq / static_cast<double>(n) - mean * mean);
  o.require(std::abs(mean) < 4 * kSigma / std::sqrt(static_cast<double>(n)), fmt("noise mean %.3g", mean));
  o.require(std::abs(sd - kSigma) < 0.03 * kSigma, fmt("noise sd %.4g", sd));

  const auto g = load_weight_file(kFixtures / "behavior_classifier.herd");
  std::size_t correct = 0;
  for (const auto& w : windows) {
    const auto p = classify_window(g, w);
    correct += static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin()) ==
               static_cast<std::size_t>(*w.label);
  }
  const double acc = static_cast<double>(correct) / static_cast<double>(windows.size());
  o.require(acc >= 0.95, fmt("fixture accuracy %.1f%%", 100 * acc));
  if (o.pass) o.detail = fmt("augmentation properties hold; fixture accuracy %.1f%% on %zu windows", 100 * acc, windows.size());
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"fused-label table and severity partition", fused_label_table},
      {"fusion head fits all 15 combinations", fusion_head_fit},
      {"int8 affine quantization", quantization},
      {"int8 forward argmax fidelity", int8_fidelity},
      {"NMS, AP/mAP and IoU against oracles", detection_oracles},
      {"detector sum-squared objective", yolo_objective},
      {"notification level rule", notification_rule},
      {"sliding window count", windowing},
      {"activity log capacity, size and FIFO order", activity_log},
      {"simulator determinism and protocol", simulator},
      {"FLOPs/params counters and model sizes", profiling},
      {"behavior pipeline", behavior_pipeline},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
