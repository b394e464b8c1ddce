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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herd/quant.hpp"
#include "herd/tensor.hpp"

namespace herd {

// Tags are part of the weight-file format; never renumber.
enum class LayerKind : std::uint8_t {
  kConv2d = 1,
  kDepthwiseConv2d = 2,
  kPointwiseConv2d = 3,
  kConv1d = 4,
  kFullyConnected = 5,
  kRelu = 6,
  kRelu6 = 7,
  kAvgPool = 8,
  kMaxPool = 9,
  kSoftmax = 10,
  kLstm = 11,
  kDropout = 12,
  kResidualAdd = 13,
  kFlatten = 14,
  kConcat = 15,
};

std::string_view layer_kind_name(LayerKind kind);
std::optional<LayerKind> layer_kind_from_tag(std::uint8_t tag);
bool is_parameterized(LayerKind kind);

// Producer index that refers to the graph input rather than a layer.
inline constexpr int kGraphInput = -1;

// One node of the graph. Tensor layouts: images are [H, W, C], sequences are
// [T, C], vectors are [N].
//
// Weight layouts (row-major):
//   conv2d            weight [Cout, k, k, Cin]   bias [Cout]
//   depthwise_conv2d  weight [k, k, C]           bias [C]
//   pointwise_conv2d  weight [Cout, Cin]         bias [Cout]
//   conv1d            weight [Cout, k, Cin]      bias [Cout]
//   fully_connected   weight [out, in]           bias [out]
//   lstm              weight [4H, in]  recurrent [4H, H]  bias [4H]
// LSTM gate rows are ordered input, forget, cell, output.
//
// Pools with kernel == 0 are global and reduce to [C].
struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  // Producers in order. Empty means "the previous layer" (or the graph input
  // for layer 0). Every index must be smaller than this layer's own index.
  std::vector<int> inputs;
  std::uint32_t in_channels = 0;
  std::uint32_t out_channels = 0;
  std::uint32_t kernel = 1;
  std::uint32_t stride = 1;
  std::uint32_t padding = 0;
  std::uint32_t hidden = 0;
  // Informational: channel expansion of the MB block this layer belongs to.
  std::uint32_t expansion = 1;
  bool use_bias = true;
  bool return_sequences = false;
  std::optional<QuantParams> output_quant;
};

namespace layers {
LayerSpec conv2d(std::uint32_t in, std::uint32_t out, std::uint32_t kernel,
                 std::uint32_t stride = 1, std::uint32_t padding = 0);
LayerSpec depthwise(std::uint32_t channels, std::uint32_t kernel,
                    std::uint32_t stride = 1, std::uint32_t padding = 0);
LayerSpec pointwise(std::uint32_t in, std::uint32_t out);
LayerSpec conv1d(std::uint32_t in, std::uint32_t out, std::uint32_t kernel,
                 std::uint32_t stride = 1, std::uint32_t padding = 0);
LayerSpec fully_connected(std::uint32_t in, std::uint32_t out, bool bias = true);
LayerSpec lstm(std::uint32_t in, std::uint32_t hidden, bool return_sequences);
LayerSpec relu();
LayerSpec relu6();
LayerSpec avg_pool(std::uint32_t kernel, std::uint32_t stride);
LayerSpec max_pool(std::uint32_t kernel, std::uint32_t stride);
LayerSpec global_avg_pool();
LayerSpec softmax();
LayerSpec dropout();
LayerSpec flatten();
LayerSpec residual_add(int a, int b);
LayerSpec concat(std::vector<int> inputs);
}  // namespace layers

// Quantized shadow of one layer's parameters. Biases live in int32 with
// scale input_scale * weight_scale and zero point 0.
struct QuantizedLayerWeights {
  QuantizedTensor weight;
  std::optional<QuantizedTensor> recurrent;
  std::vector<std::int32_t> bias;
  // Set when fan-in * 255^2 + |bias| could exceed int32.
  bool wide_accumulator = false;
};

// Per-layer named float tensors ("weight", "bias", "recurrent") plus the
// optional quantized shadow produced by calibration.
class WeightStore {
 public:
  void resize(std::size_t layers);
  std::size_t layer_count() const { return tensors_.size(); }

  void set(std::size_t layer, const std::string& name, FloatTensor t);
  bool has(std::size_t layer, const std::string& name) const;
  const FloatTensor& get(std::size_t layer, const std::string& name) const;
  FloatTensor& mutable_get(std::size_t layer, const std::string& name);
  const std::map<std::string, FloatTensor>& layer(std::size_t layer) const {
    return tensors_.at(layer);
  }

  void set_quantized(std::size_t layer, QuantizedLayerWeights q);
  const QuantizedLayerWeights* quantized(std::size_t layer) const;
  void clear_quantized();

 private:
  std::vector<std::map<std::string, FloatTensor>> tensors_;
  std::vector<std::optional<QuantizedLayerWeights>> quantized_;
};

struct ModelGraph {
  Shape input_shape;
  std::vector<LayerSpec> layers;
  WeightStore weights;
  std::optional<QuantParams> input_quant;
  // Filled by validate_graph: output shape of every layer.
  std::vector<Shape> resolved_shapes;

  // Appends a layer and sizes the weight store to match. Returns its index.
  int add(LayerSpec spec);
  const Shape& output_shape() const;
  bool is_quantized() const;
};

// Producer indices after applying the "empty means previous" rule.
std::vector<int> layer_inputs(const ModelGraph& g, std::size_t layer);

// Shape inference plus wiring and weight checks. Throws ShapeError naming the
// first offending layer, or InvalidArgument for an empty graph or bad wiring.
ModelGraph validate_graph(ModelGraph g);
std::vector<Shape> resolve_shapes(const ModelGraph& g);

// Allocates correctly shaped weights for every parameterized layer, drawn
// uniformly from [-limit, limit] with limit = sqrt(6 / fan_in) * gain.
void init_weights(ModelGraph& g, std::uint64_t seed, double gain = 1.0);
// Zero all parameters.
void zero_weights(ModelGraph& g);

// Hook for instrumented forward passes: called for every multiply-accumulate
// and every parameter element read.
class ForwardObserver {
 public:
  virtual ~ForwardObserver() = default;
  virtual void on_mac(std::size_t layer) = 0;
  virtual void on_param_read(std::size_t layer, std::string_view tensor,
                             std::size_t index) = 0;
};

// Inference-mode forward pass (dropout is the identity). Throws ShapeError on
// an input mismatch and Error if a layer produces a non-finite value.
FloatTensor forward_float(const ModelGraph& g, const FloatTensor& x,
                          ForwardObserver* observer = nullptr);
// Outputs of every layer, in layer order.
std::vector<FloatTensor> forward_float_all(const ModelGraph& g, const FloatTensor& x);

// Fills input_quant, every layer's output_quant and the quantized weight
// shadow from representative inputs.
ModelGraph calibrate(ModelGraph g, std::span<const FloatTensor> representative);

// Rebuilds the quantized weight shadow from the float weights, given that
// input_quant and every output_quant are already set (e.g. after loading a
// weight file).
ModelGraph quantize_weights(ModelGraph g);

// Integer forward pass. Requires a calibrated graph; the input must already be
// quantized with the graph's input parameters (it is requantized otherwise).
QuantizedTensor forward_int8(const ModelGraph& g, const QuantizedTensor& x);

struct MemoryProfile {
  std::uint64_t flops = 0;  // multiply-accumulates
  std::uint64_t params = 0;
  std::uint64_t peak_activation_bytes = 0;
};

std::uint64_t count_flops(const ModelGraph& g);
std::uint64_t count_params(const ModelGraph& g);
std::uint64_t count_nonzero_params(const ModelGraph& g);
std::uint64_t peak_activation(const ModelGraph& g, std::size_t bytes_per_element);
MemoryProfile profile(const ModelGraph& g, std::size_t bytes_per_element);

// Iterative unstructured magnitude pruning of weight and recurrent tensors
// (biases are kept). Iteration k of n zeroes the smallest-magnitude weights
// until round(target * k / n * prunable) are zero. The result carries no
// quantized shadow. When history is given it receives the non-zero parameter
// count after each iteration.
ModelGraph prune_magnitude(const ModelGraph& g, double target_sparsity, int iterations,
                           std::vector<std::uint64_t>* history = nullptr);

}  // namespace herd
