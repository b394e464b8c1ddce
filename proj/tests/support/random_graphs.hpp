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
#include <random>
#include <vector>

#include "herd/graph.hpp"

namespace herd::testing {

// Small validated graphs with random topology and weights: image stacks with
// MB-style depthwise/pointwise blocks and residuals, 1-D conv + LSTM sequence
// models, and plain MLPs. Every graph ends in a fully connected classifier.
ModelGraph random_small_graph(std::uint64_t seed);

FloatTensor random_input(const Shape& shape, std::mt19937_64& rng, float lo = -1.0f, float hi = 1.0f);
std::vector<FloatTensor> random_inputs(const Shape& shape, std::size_t n, std::uint64_t seed);

std::size_t argmax(const FloatTensor& t);
std::size_t argmax(const QuantizedTensor& t);

}  // namespace herd::testing
