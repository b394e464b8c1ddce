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

#include <benchmark/benchmark.h>

#include <random>

#include "herd/behavior.hpp"
#include "herd/detection.hpp"
#include "herd/graph.hpp"
#include "herd/model_zoo.hpp"
#include "herd/sim/simulator.hpp"

namespace {

using namespace herd;

FloatTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> d(-1.0f, 1.0f);
  FloatTensor t(shape);
  for (auto& v : t.data()) v = d(rng);
  return t;
}

zoo::CnnLstmConfig small_behavior() {
  auto c = zoo::behavior_config();
  c.lstm_layers = 1;
  return c;
}

void BM_ForwardFloatBehavior(benchmark::State& state) {
  const auto g = zoo::cnn_lstm(small_behavior(), 1);
  const auto x = random_tensor(g.input_shape, 2);
  for (auto _ : state) benchmark::DoNotOptimize(forward_float(g, x));
  state.counters["MACs"] = static_cast<double>(count_flops(g));
}
BENCHMARK(BM_ForwardFloatBehavior)->Unit(benchmark::kMillisecond);

void BM_ForwardInt8Behavior(benchmark::State& state) {
  const auto g0 = zoo::cnn_lstm(small_behavior(), 1);
  std::vector<FloatTensor> reps;
  for (std::uint64_t s = 0; s < 8; ++s) reps.push_back(random_tensor(g0.input_shape, s));
  const auto g = calibrate(g0, reps);
  const auto x = quantize_tensor(reps[0], *g.input_quant);
  for (auto _ : state) benchmark::DoNotOptimize(forward_int8(g, x));
}
BENCHMARK(BM_ForwardInt8Behavior)->Unit(benchmark::kMillisecond);

void BM_ForwardFloatEnvClassifier(benchmark::State& state) {
  const auto g = zoo::env_classifier(32, 3, 1);
  const auto x = random_tensor(g.input_shape, 3);
  for (auto _ : state) benchmark::DoNotOptimize(forward_float(g, x));
}
BENCHMARK(BM_ForwardFloatEnvClassifier)->Unit(benchmark::kMicrosecond);

void BM_ForwardInt8EnvClassifier(benchmark::State& state) {
  const auto g0 = zoo::env_classifier(32, 3, 1);
  std::vector<FloatTensor> reps;
  for (std::uint64_t s = 0; s < 8; ++s) reps.push_back(random_tensor(g0.input_shape, s));
  const auto g = calibrate(g0, reps);
  const auto x = quantize_tensor(reps[0], *g.input_quant);
  for (auto _ : state) benchmark::DoNotOptimize(forward_int8(g, x));
}
BENCHMARK(BM_ForwardInt8EnvClassifier)->Unit(benchmark::kMicrosecond);

void BM_Nms(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.8);
  std::vector<Detection> dets;
  for (int i = 0; i < state.range(0); ++i) {
    const double x = u(rng), y = u(rng);
    dets.push_back({{x, y, x + 0.2, y + 0.2}, i % 4, u(rng)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(nms(dets, 0.5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Nms)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_SimulateFleet(benchmark::State& state) {
  sim::Scenario s;
  for (std::uint16_t i = 0; i < 4; ++i) {
    sim::GatewaySpec g;
    g.id = static_cast<std::uint16_t>(i + 1);
    g.position = {80.0 * i, 0};
    g.inference_ms = 100;
    std::vector<Detection> frame;
    for (int k = 0; k <= i; ++k) frame.push_back({{0.1 * k, 0.1, 0.1 * k + 0.05, 0.2}, 0, 0.9});
    g.frames.push_back(frame);
    s.gateways.push_back(g);
  }
  for (std::uint16_t i = 0; i < 16; ++i) {
    sim::CollarSpec c;
    c.id = static_cast<std::uint16_t>(100 + i);
    c.position = {20.0 * i, 40};
    c.log_interval_ms = 10000;
    for (int l = 0; l < 8; ++l) {
      sim::CollarInput in;
      in.label = static_cast<FusedLabel>((l + i) % 8);
      c.inputs.push_back(in);
    }
    s.collars.push_back(c);
  }
  s.drop_probability = 0.1;
  const auto horizon = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_simulation(s, horizon, 1));
}
BENCHMARK(BM_SimulateFleet)->Arg(60000)->Arg(600000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
