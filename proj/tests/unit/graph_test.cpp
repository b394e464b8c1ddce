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

#include <cmath>
#include <random>

#include "herd/error.hpp"
#include "herd/graph.hpp"
#include "random_graphs.hpp"

namespace herd {
namespace {

ModelGraph single(Shape input, LayerSpec spec) {
  ModelGraph g;
  g.input_shape = std::move(input);
  g.add(std::move(spec));
  return g;
}

TEST(Graph, FullyConnectedByHand) {
  auto g = single({3}, layers::fully_connected(3, 2));
  g.weights.set(0, "weight", FloatTensor({2, 3}, {1, 2, 3, -1, 0, 1}));
  g.weights.set(0, "bias", FloatTensor({2}, {0.5f, -0.5f}));
  g = validate_graph(std::move(g));
  const auto y = forward_float(g, FloatTensor({3}, {1, 1, 2}));
  ASSERT_EQ(y.shape(), (Shape{2}));
  EXPECT_FLOAT_EQ(y[0], 1 + 2 + 6 + 0.5f);
  EXPECT_FLOAT_EQ(y[1], -1 + 2 - 0.5f);
}

TEST(Graph, Conv2dPaddedByHand) {
  // 3x3 single-channel input, 3x3 all-ones kernel, padding 1: every output is
  // the sum of the in-bounds neighbourhood.
  auto g = single({3, 3, 1}, layers::conv2d(1, 1, 3, 1, 1));
  g.weights.set(0, "weight", FloatTensor({1, 3, 3, 1}, std::vector<float>(9, 1.0f)));
  g.weights.set(0, "bias", FloatTensor({1}, {0.0f}));
  g = validate_graph(std::move(g));
  const auto y = forward_float(g, FloatTensor({3, 3, 1}, {1, 2, 3, 4, 5, 6, 7, 8, 9}));
  const std::vector<float> want{12, 21, 16, 27, 45, 33, 24, 39, 28};
  for (std::size_t i = 0; i < 9; ++i) EXPECT_FLOAT_EQ(y[i], want[i]) << i;
}

TEST(Graph, DepthwiseKeepsChannelsSeparate) {
  auto g = single({2, 2, 2}, layers::depthwise(2, 2));
  g.weights.set(0, "weight", FloatTensor({2, 2, 2}, {1, 0, 1, 0, 1, 0, 1, 10}));
  g.weights.set(0, "bias", FloatTensor({2}, {0, 1}));
  g = validate_graph(std::move(g));
  const auto y = forward_float(g, FloatTensor({2, 2, 2}, {1, 100, 2, 100, 3, 100, 4, 5}));
  ASSERT_EQ(y.shape(), (Shape{1, 1, 2}));
  EXPECT_FLOAT_EQ(y[0], 10);
  EXPECT_FLOAT_EQ(y[1], 51);
}

TEST(Graph, PoolingAndActivations) {
  ModelGraph g;
  g.input_shape = {4, 1};
  g.add(layers::max_pool(2, 2));
  g.add(layers::relu6());
  g = validate_graph(std::move(g));
  const auto y = forward_float(g, FloatTensor({4, 1}, {-3, -1, 9, 2}));
  ASSERT_EQ(y.shape(), (Shape{2, 1}));
  EXPECT_FLOAT_EQ(y[0], 0);
  EXPECT_FLOAT_EQ(y[1], 6);

  ModelGraph avg;
  avg.input_shape = {2, 2, 1};
  avg.add(layers::global_avg_pool());
  avg = validate_graph(std::move(avg));
  EXPECT_FLOAT_EQ(forward_float(avg, FloatTensor({2, 2, 1}, {1, 2, 3, 6}))[0], 3);
}

TEST(Graph, SoftmaxIsADistribution) {
  auto g = validate_graph(single({4}, layers::softmax()));
  const auto y = forward_float(g, FloatTensor({4}, {1000, 999, -5, 0}));
  double sum = 0;
  for (float v : y.data()) {
    EXPECT_GE(v, 0.0f);
    sum += v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-6);
  EXPECT_GT(y[0], y[1]);
}

// Scalar LSTM written out gate by gate.
std::vector<float> lstm_oracle(const std::vector<std::vector<float>>& xs, const FloatTensor& w,
                               const FloatTensor& r, const FloatTensor& b, std::size_t hidden) {
  const std::size_t in = xs[0].size();
  std::vector<double> h(hidden, 0.0), c(hidden, 0.0);
  auto sigm = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  for (const auto& x : xs) {
    std::vector<double> pre(4 * hidden);
    for (std::size_t row = 0; row < 4 * hidden; ++row) {
      double acc = b[row];
      for (std::size_t k = 0; k < in; ++k) acc += w[row * in + k] * x[k];
      for (std::size_t k = 0; k < hidden; ++k) acc += r[row * hidden + k] * h[k];
      pre[row] = acc;
    }
    for (std::size_t j = 0; j < hidden; ++j) {
      const double i = sigm(pre[j]);
      const double f = sigm(pre[hidden + j]);
      const double gc = std::tanh(pre[2 * hidden + j]);
      const double o = sigm(pre[3 * hidden + j]);
      c[j] = f * c[j] + i * gc;
      h[j] = o * std::tanh(c[j]);
    }
  }
  return {h.begin(), h.end()};
}

TEST(Graph, LstmMatchesScalarOracle) {
  constexpr std::size_t T = 6, C = 3, H = 4;
  ModelGraph g;
  g.input_shape = {T, C};
  g.add(layers::lstm(C, H, false));
  init_weights(g, 5);
  g = validate_graph(std::move(g));
  std::mt19937_64 rng(3);
  const auto x = testing::random_input({T, C}, rng);
  std::vector<std::vector<float>> xs(T, std::vector<float>(C));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < C; ++k) xs[t][k] = x[t * C + k];
  }
  const auto want = lstm_oracle(xs, g.weights.get(0, "weight"), g.weights.get(0, "recurrent"),
                                g.weights.get(0, "bias"), H);
  const auto y = forward_float(g, x);
  ASSERT_EQ(y.size(), H);
  for (std::size_t j = 0; j < H; ++j) EXPECT_NEAR(y[j], want[j], 1e-5);
}

TEST(Graph, ResidualAddAndDropoutIdentity) {
  ModelGraph g;
  g.input_shape = {3};
  g.add(layers::dropout());
  g.add(layers::relu());
  g.add(layers::residual_add(0, 1));
  g = validate_graph(std::move(g));
  const auto y = forward_float(g, FloatTensor({3}, {-1, 2, 0}));
  EXPECT_FLOAT_EQ(y[0], -1);
  EXPECT_FLOAT_EQ(y[1], 4);
  EXPECT_FLOAT_EQ(y[2], 0);
}

TEST(Graph, ValidationErrors) {
  EXPECT_THROW(validate_graph(ModelGraph{}), InvalidArgument);

  auto bad = single({5}, layers::fully_connected(3, 2));
  init_weights(bad, 1);
  EXPECT_THROW(validate_graph(bad), ShapeError);

  auto missing = single({3}, layers::fully_connected(3, 2));
  EXPECT_THROW(validate_graph(missing), InvalidArgument);

  ModelGraph wiring;
  wiring.input_shape = {3};
  wiring.add(layers::residual_add(0, 4));
  EXPECT_THROW(validate_graph(wiring), Error);
}

TEST(Graph, InputShapeMismatch) {
  auto g = single({3}, layers::fully_connected(3, 2));
  init_weights(g, 1);
  g = validate_graph(std::move(g));
  EXPECT_THROW(forward_float(g, FloatTensor({4})), ShapeError);
}

TEST(Graph, RandomGraphsValidateAndRunFinite) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = testing::random_small_graph(seed);
    const auto xs = testing::random_inputs(g.input_shape, 3, seed);
    for (const auto& x : xs) {
      const auto y = forward_float(g, x);
      EXPECT_TRUE(y.all_finite()) << "seed " << seed;
      EXPECT_EQ(y.shape(), g.output_shape());
    }
  }
}

}  // namespace
}  // namespace herd
