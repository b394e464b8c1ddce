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

#include <algorithm>

#include "herd/graph.hpp"

namespace herd {
namespace {

std::uint64_t layer_macs(const LayerSpec& s, const Shape& in, const Shape& out) {
  const std::uint64_t k = s.kernel;
  switch (s.kind) {
    case LayerKind::kConv2d:
      return k * k * s.in_channels * s.out_channels * out[0] * out[1];
    case LayerKind::kDepthwiseConv2d:
      return k * k * s.in_channels * out[0] * out[1];
    case LayerKind::kPointwiseConv2d:
      return static_cast<std::uint64_t>(s.in_channels) * s.out_channels *
             (num_elements(out) / s.out_channels);
    case LayerKind::kConv1d:
      return k * s.in_channels * s.out_channels * out[0];
    case LayerKind::kFullyConnected:
      return static_cast<std::uint64_t>(s.in_channels) * s.out_channels;
    case LayerKind::kLstm: {
      const std::uint64_t h = s.hidden;
      return 4 * (s.in_channels * h + h * h) * in[0];
    }
    default:
      return 0;
  }
}

}  // namespace

std::uint64_t count_flops(const ModelGraph& g) {
  const auto shapes = resolve_shapes(g);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    const int p = layer_inputs(g, i).front();
    const Shape& in = p == kGraphInput ? g.input_shape : shapes[static_cast<std::size_t>(p)];
    total += layer_macs(g.layers[i], in, shapes[i]);
  }
  return total;
}

std::uint64_t count_params(const ModelGraph& g) {
  resolve_shapes(g);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    if (!is_parameterized(g.layers[i].kind)) continue;
    for (const auto& [name, t] : g.weights.layer(i)) total += t.size();
  }
  return total;
}

std::uint64_t count_nonzero_params(const ModelGraph& g) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    if (!is_parameterized(g.layers[i].kind)) continue;
    for (const auto& [name, t] : g.weights.layer(i)) {
      total += static_cast<std::uint64_t>(
          std::count_if(t.data().begin(), t.data().end(), [](float v) { return v != 0.0f; }));
    }
  }
  return total;
}

std::uint64_t peak_activation(const ModelGraph& g, std::size_t bytes_per_element) {
  const auto shapes = resolve_shapes(g);
  std::uint64_t peak = 0;
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    std::uint64_t elems = num_elements(shapes[i]);
    for (int p : layer_inputs(g, i)) {
      elems += num_elements(p == kGraphInput ? g.input_shape : shapes[static_cast<std::size_t>(p)]);
    }
    peak = std::max(peak, elems * bytes_per_element);
  }
  return peak;
}

MemoryProfile profile(const ModelGraph& g, std::size_t bytes_per_element) {
  return MemoryProfile{count_flops(g), count_params(g), peak_activation(g, bytes_per_element)};
}

}  // namespace herd
