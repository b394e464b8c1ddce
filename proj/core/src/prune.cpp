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
#include <cmath>
#include <numeric>
#include <string>

#include "herd/error.hpp"
#include "herd/graph.hpp"

namespace herd {

ModelGraph prune_magnitude(const ModelGraph& g, double target_sparsity, int iterations,
                           std::vector<std::uint64_t>* history) {
  if (!(target_sparsity > 0.0 && target_sparsity < 1.0)) {
    throw InvalidArgument("target sparsity must lie in (0, 1), got " +
                          std::to_string(target_sparsity));
  }
  if (iterations < 1) throw InvalidArgument("pruning needs at least one iteration");

  ModelGraph out = g;
  out.weights.clear_quantized();
  for (auto& s : out.layers) s.output_quant.reset();
  out.input_quant.reset();

  // Flat view over every prunable element.
  std::vector<float*> slots;
  for (std::size_t i = 0; i < out.layers.size(); ++i) {
    if (!is_parameterized(out.layers[i].kind)) continue;
    for (const char* name : {"weight", "recurrent"}) {
      if (!out.weights.has(i, name)) continue;
      for (float& v : out.weights.mutable_get(i, name).data()) slots.push_back(&v);
    }
  }

  std::vector<std::size_t> order(slots.size());
  for (int it = 1; it <= iterations; ++it) {
    const double sparsity = target_sparsity * it / iterations;
    const auto goal = static_cast<std::size_t>(
        std::llround(sparsity * static_cast<double>(slots.size())));
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Already-zero weights sort first, so they are never revived.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::fabs(*slots[a]) < std::fabs(*slots[b]);
    });
    for (std::size_t k = 0; k < goal && k < order.size(); ++k) *slots[order[k]] = 0.0f;
    if (history != nullptr) history->push_back(count_nonzero_params(out));
  }
  return out;
}

}  // namespace herd
