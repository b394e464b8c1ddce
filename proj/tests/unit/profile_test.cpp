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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "herd/error.hpp"
#include "herd/model_zoo.hpp"
#include "oracles.hpp"
#include "random_graphs.hpp"

namespace herd {
namespace {

TEST(Profile, FullyConnectedByHand) {
  ModelGraph g;
  g.input_shape = {10};
  g.add(layers::fully_connected(10, 20));
  g.add(layers::relu());
  g.add(layers::fully_connected(20, 3, false));
  init_weights(g, 1);
  g = validate_graph(std::move(g));
  EXPECT_EQ(count_flops(g), 10u * 20 + 20 * 3);
  EXPECT_EQ(count_params(g), 10u * 20 + 20 + 20 * 3);
  // Largest input + output pair: relu reads 20 and writes 20 values.
  EXPECT_EQ(peak_activation(g, 1), 40u);
  EXPECT_EQ(peak_activation(g, 4), 160u);
}

TEST(Profile, CountersMatchInstrumentedForward) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = testing::random_small_graph(seed);
    const auto oracle = testing::instrumented_counts(g);
    EXPECT_EQ(count_flops(g), oracle.macs) << "seed " << seed;
    EXPECT_EQ(count_params(g), oracle.params) << "seed " << seed;
  }
}

TEST(Profile, MbBlockMatchesInstrumentedForward) {
  ModelGraph g;
  g.input_shape = {12, 12, 8};
  zoo::mb_block(g, kGraphInput, 8, 8, 6, 3, 1);
  zoo::mb_block(g, static_cast<int>(g.layers.size()) - 1, 8, 16, 4, 5, 2);
  init_weights(g, 3);
  g = validate_graph(std::move(g));
  const auto oracle = testing::instrumented_counts(g);
  EXPECT_EQ(count_flops(g), oracle.macs);
  EXPECT_EQ(count_params(g), oracle.params);
}

TEST(Profile, PeakActivationIsLargestLayerFootprint) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_small_graph(seed);
    const auto outs = forward_float_all(g, testing::random_inputs(g.input_shape, 1, seed)[0]);
    std::uint64_t peak = 0;
    for (std::size_t i = 0; i < g.layers.size(); ++i) {
      std::uint64_t in = 0;
      for (int p : layer_inputs(g, i)) {
        in += p == kGraphInput ? num_elements(g.input_shape) : outs[static_cast<std::size_t>(p)].size();
      }
      peak = std::max(peak, in + outs[i].size());
    }
    EXPECT_EQ(peak_activation(g, 1), peak) << "seed " << seed;
    EXPECT_EQ(peak_activation(g, 4), 4 * peak) << "seed " << seed;
  }
}

TEST(Prune, ReachesTargetAndKeepsLargestWeights) {
  auto g = testing::random_small_graph(10);
  std::vector<std::uint64_t> history;
  const auto p = prune_magnitude(g, 0.6, 4, &history);
  ASSERT_EQ(history.size(), 4u);
  EXPECT_TRUE(std::is_sorted(history.rbegin(), history.rend()));
  EXPECT_FALSE(p.is_quantized());

  std::uint64_t prunable = 0, zeros = 0;
  float max_removed = 0.0f, min_kept = INFINITY;
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    for (const auto& [name, t] : g.weights.layer(i)) {
      const auto& after = p.weights.get(i, name);
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (name == "bias") {
          EXPECT_EQ(after[k], t[k]);
          continue;
        }
        ++prunable;
        if (after[k] == 0.0f) {
          ++zeros;
          max_removed = std::max(max_removed, std::abs(t[k]));
        } else {
          EXPECT_EQ(after[k], t[k]);
          min_kept = std::min(min_kept, std::abs(t[k]));
        }
      }
    }
  }
  EXPECT_EQ(zeros, static_cast<std::uint64_t>(std::llround(0.6 * static_cast<double>(prunable))));
  EXPECT_LE(max_removed, min_kept);
  EXPECT_EQ(history.back(), count_nonzero_params(p));
}

TEST(Prune, RejectsBadArguments) {
  const auto g = testing::random_small_graph(11);
  EXPECT_THROW(prune_magnitude(g, 0.0, 3), InvalidArgument);
  EXPECT_THROW(prune_magnitude(g, 1.0, 3), InvalidArgument);
  EXPECT_THROW(prune_magnitude(g, 0.5, 0), InvalidArgument);
}

}  // namespace
}  // namespace herd
