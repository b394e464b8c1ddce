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

#include "herd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "herd/error.hpp"

namespace herd {

std::string_view layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2d: return "conv2d";
    case LayerKind::kDepthwiseConv2d: return "depthwise_conv2d";
    case LayerKind::kPointwiseConv2d: return "pointwise_conv2d";
    case LayerKind::kConv1d: return "conv1d";
    case LayerKind::kFullyConnected: return "fully_connected";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kRelu6: return "relu6";
    case LayerKind::kAvgPool: return "avg_pool";
    case LayerKind::kMaxPool: return "max_pool";
    case LayerKind::kSoftmax: return "softmax";
    case LayerKind::kLstm: return "lstm_layer";
    case LayerKind::kDropout: return "dropout";
    case LayerKind::kResidualAdd: return "residual_add";
    case LayerKind::kFlatten: return "flatten";
    case LayerKind::kConcat: return "concat";
  }
  return "unknown";
}

std::optional<LayerKind> layer_kind_from_tag(std::uint8_t tag) {
  if (tag < static_cast<std::uint8_t>(LayerKind::kConv2d) ||
      tag > static_cast<std::uint8_t>(LayerKind::kConcat)) {
    return std::nullopt;
  }
  return static_cast<LayerKind>(tag);
}

bool is_parameterized(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv2d:
    case LayerKind::kDepthwiseConv2d:
    case LayerKind::kPointwiseConv2d:
    case LayerKind::kConv1d:
    case LayerKind::kFullyConnected:
    case LayerKind::kLstm:
      return true;
    default:
      return false;
  }
}

namespace layers {

LayerSpec conv2d(std::uint32_t in, std::uint32_t out, std::uint32_t kernel,
                 std::uint32_t stride, std::uint32_t padding) {
  LayerSpec s;
  s.kind = LayerKind::kConv2d;
  s.in_channels = in;
  s.out_channels = out;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = padding;
  return s;
}

LayerSpec depthwise(std::uint32_t channels, std::uint32_t kernel, std::uint32_t stride,
                    std::uint32_t padding) {
  LayerSpec s;
  s.kind = LayerKind::kDepthwiseConv2d;
  s.in_channels = channels;
  s.out_channels = channels;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = padding;
  return s;
}

LayerSpec pointwise(std::uint32_t in, std::uint32_t out) {
  LayerSpec s;
  s.kind = LayerKind::kPointwiseConv2d;
  s.in_channels = in;
  s.out_channels = out;
  return s;
}

LayerSpec conv1d(std::uint32_t in, std::uint32_t out, std::uint32_t kernel,
                 std::uint32_t stride, std::uint32_t padding) {
  LayerSpec s = conv2d(in, out, kernel, stride, padding);
  s.kind = LayerKind::kConv1d;
  return s;
}

LayerSpec fully_connected(std::uint32_t in, std::uint32_t out, bool bias) {
  LayerSpec s;
  s.kind = LayerKind::kFullyConnected;
  s.in_channels = in;
  s.out_channels = out;
  s.use_bias = bias;
  return s;
}

LayerSpec lstm(std::uint32_t in, std::uint32_t hidden, bool return_sequences) {
  LayerSpec s;
  s.kind = LayerKind::kLstm;
  s.in_channels = in;
  s.hidden = hidden;
  s.out_channels = hidden;
  s.return_sequences = return_sequences;
  return s;
}

namespace {
LayerSpec simple(LayerKind kind) {
  LayerSpec s;
  s.kind = kind;
  return s;
}
}  // namespace

LayerSpec relu() { return simple(LayerKind::kRelu); }
LayerSpec relu6() { return simple(LayerKind::kRelu6); }
LayerSpec softmax() { return simple(LayerKind::kSoftmax); }
LayerSpec dropout() { return simple(LayerKind::kDropout); }
LayerSpec flatten() { return simple(LayerKind::kFlatten); }

LayerSpec avg_pool(std::uint32_t kernel, std::uint32_t stride) {
  LayerSpec s = simple(LayerKind::kAvgPool);
  s.kernel = kernel;
  s.stride = stride;
  return s;
}

LayerSpec max_pool(std::uint32_t kernel, std::uint32_t stride) {
  LayerSpec s = simple(LayerKind::kMaxPool);
  s.kernel = kernel;
  s.stride = stride;
  return s;
}

LayerSpec global_avg_pool() { return avg_pool(0, 1); }

LayerSpec residual_add(int a, int b) {
  LayerSpec s = simple(LayerKind::kResidualAdd);
  s.inputs = {a, b};
  return s;
}

LayerSpec concat(std::vector<int> inputs) {
  LayerSpec s = simple(LayerKind::kConcat);
  s.inputs = std::move(inputs);
  return s;
}

}  // namespace layers

// ---------------------------------------------------------------------------
// WeightStore

void WeightStore::resize(std::size_t layers) {
  tensors_.resize(layers);
  quantized_.resize(layers);
}

void WeightStore::set(std::size_t layer, const std::string& name, FloatTensor t) {
  if (layer >= tensors_.size()) resize(layer + 1);
  tensors_[layer][name] = std::move(t);
  quantized_[layer].reset();
}

bool WeightStore::has(std::size_t layer, const std::string& name) const {
  return layer < tensors_.size() && tensors_[layer].contains(name);
}

const FloatTensor& WeightStore::get(std::size_t layer, const std::string& name) const {
  if (!has(layer, name)) {
    throw InvalidArgument("layer " + std::to_string(layer) + " has no tensor '" + name + "'");
  }
  return tensors_[layer].at(name);
}

FloatTensor& WeightStore::mutable_get(std::size_t layer, const std::string& name) {
  if (!has(layer, name)) {
    throw InvalidArgument("layer " + std::to_string(layer) + " has no tensor '" + name + "'");
  }
  quantized_[layer].reset();
  return tensors_[layer].at(name);
}

void WeightStore::set_quantized(std::size_t layer, QuantizedLayerWeights q) {
  if (layer >= quantized_.size()) resize(layer + 1);
  quantized_[layer] = std::move(q);
}

const QuantizedLayerWeights* WeightStore::quantized(std::size_t layer) const {
  if (layer >= quantized_.size() || !quantized_[layer]) return nullptr;
  return &*quantized_[layer];
}

void WeightStore::clear_quantized() {
  for (auto& q : quantized_) q.reset();
}

// ---------------------------------------------------------------------------
// ModelGraph

int ModelGraph::add(LayerSpec spec) {
  layers.push_back(std::move(spec));
  weights.resize(layers.size());
  resolved_shapes.clear();
  return static_cast<int>(layers.size()) - 1;
}

const Shape& ModelGraph::output_shape() const {
  if (resolved_shapes.empty()) throw InvalidArgument("graph has not been validated");
  return resolved_shapes.back();
}

bool ModelGraph::is_quantized() const {
  if (!input_quant) return false;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].output_quant) return false;
    if (is_parameterized(layers[i].kind) && weights.quantized(i) == nullptr) return false;
  }
  return true;
}

std::vector<int> layer_inputs(const ModelGraph& g, std::size_t layer) {
  const auto& spec = g.layers.at(layer);
  if (!spec.inputs.empty()) return spec.inputs;
  return {static_cast<int>(layer) - 1};
}

namespace {

std::string where(std::size_t i, const LayerSpec& s) {
  return "layer " + std::to_string(i) + " (" + std::string(layer_kind_name(s.kind)) + ")";
}

// Output length of a sliding window, or nullopt when the kernel does not fit.
std::optional<std::size_t> window_out(std::size_t in, std::uint32_t k, std::uint32_t s,
                                      std::uint32_t pad) {
  const std::size_t padded = in + 2 * static_cast<std::size_t>(pad);
  if (k == 0 || s == 0 || padded < k) return std::nullopt;
  return (padded - k) / s + 1;
}

Shape expected_weight_shape(const LayerSpec& s) {
  switch (s.kind) {
    case LayerKind::kConv2d: return {s.out_channels, s.kernel, s.kernel, s.in_channels};
    case LayerKind::kDepthwiseConv2d: return {s.kernel, s.kernel, s.in_channels};
    case LayerKind::kPointwiseConv2d: return {s.out_channels, s.in_channels};
    case LayerKind::kConv1d: return {s.out_channels, s.kernel, s.in_channels};
    case LayerKind::kFullyConnected: return {s.out_channels, s.in_channels};
    case LayerKind::kLstm: return {4 * static_cast<std::size_t>(s.hidden), s.in_channels};
    default: return {};
  }
}

std::size_t bias_length(const LayerSpec& s) {
  if (s.kind == LayerKind::kLstm) return 4 * static_cast<std::size_t>(s.hidden);
  if (s.kind == LayerKind::kDepthwiseConv2d) return s.in_channels;
  return s.out_channels;
}

void check_weights(const ModelGraph& g, std::size_t i) {
  const auto& s = g.layers[i];
  if (!is_parameterized(s.kind)) return;
  auto need = [&](const std::string& name, const Shape& shape) {
    if (!g.weights.has(i, name)) {
      throw InvalidArgument(where(i, s) + ": missing weight tensor '" + name + "'");
    }
    if (g.weights.get(i, name).shape() != shape) {
      throw ShapeError(where(i, s) + ": tensor '" + name + "' has shape " +
                       shape_to_string(g.weights.get(i, name).shape()) + ", expected " +
                       shape_to_string(shape));
    }
  };
  need("weight", expected_weight_shape(s));
  if (s.kind == LayerKind::kLstm) {
    need("recurrent", {4 * static_cast<std::size_t>(s.hidden), s.hidden});
  }
  if (s.use_bias) need("bias", {bias_length(s)});
}

void check_positive(std::size_t i, const LayerSpec& s) {
  auto fail = [&](const char* what) {
    throw InvalidArgument(where(i, s) + ": " + what + " must be positive");
  };
  if (s.stride == 0) fail("stride");
  if (s.expansion == 0) fail("expansion ratio");
  switch (s.kind) {
    case LayerKind::kConv2d:
    case LayerKind::kDepthwiseConv2d:
    case LayerKind::kConv1d:
      if (s.kernel == 0) fail("kernel");
      [[fallthrough]];
    case LayerKind::kPointwiseConv2d:
    case LayerKind::kFullyConnected:
      if (s.in_channels == 0) fail("input channels");
      if (s.out_channels == 0) fail("output channels");
      break;
    case LayerKind::kLstm:
      if (s.in_channels == 0) fail("input size");
      if (s.hidden == 0) fail("hidden size");
      break;
    default:
      break;
  }
}

Shape infer_shape(std::size_t i, const LayerSpec& s, const std::vector<const Shape*>& in) {
  auto mismatch = [&](const std::string& detail) -> ShapeError {
    return ShapeError("shape mismatch at " + where(i, s) + ": " + detail);
  };
  const std::size_t arity =
      (s.kind == LayerKind::kResidualAdd || s.kind == LayerKind::kConcat) ? 0 : 1;
  if (arity == 1 && in.size() != 1) {
    throw InvalidArgument(where(i, s) + ": expects exactly one input");
  }
  const Shape& x = *in.front();
  switch (s.kind) {
    case LayerKind::kConv2d:
    case LayerKind::kDepthwiseConv2d: {
      if (x.size() != 3 || x[2] != s.in_channels) {
        throw mismatch("expected [H, W, " + std::to_string(s.in_channels) + "], got " +
                       shape_to_string(x));
      }
      auto h = window_out(x[0], s.kernel, s.stride, s.padding);
      auto w = window_out(x[1], s.kernel, s.stride, s.padding);
      if (!h || !w) throw mismatch("kernel larger than padded input " + shape_to_string(x));
      return {*h, *w, s.kind == LayerKind::kConv2d ? s.out_channels : s.in_channels};
    }
    case LayerKind::kPointwiseConv2d: {
      if (x.empty() || x.back() != s.in_channels) {
        throw mismatch("expected trailing channel dim " + std::to_string(s.in_channels) +
                       ", got " + shape_to_string(x));
      }
      if (s.stride != 1) throw mismatch("pointwise convolution requires stride 1");
      Shape out = x;
      out.back() = s.out_channels;
      return out;
    }
    case LayerKind::kConv1d: {
      if (x.size() != 2 || x[1] != s.in_channels) {
        throw mismatch("expected [T, " + std::to_string(s.in_channels) + "], got " +
                       shape_to_string(x));
      }
      auto t = window_out(x[0], s.kernel, s.stride, s.padding);
      if (!t) throw mismatch("kernel larger than padded input " + shape_to_string(x));
      return {*t, s.out_channels};
    }
    case LayerKind::kFullyConnected:
      if (num_elements(x) != s.in_channels) {
        throw mismatch("fan-in " + std::to_string(s.in_channels) + " but producer emits " +
                       shape_to_string(x));
      }
      return {s.out_channels};
    case LayerKind::kLstm:
      if (x.size() != 2 || x[1] != s.in_channels) {
        throw mismatch("expected [T, " + std::to_string(s.in_channels) + "], got " +
                       shape_to_string(x));
      }
      if (x[0] == 0) throw mismatch("empty sequence");
      if (s.return_sequences) return {x[0], s.hidden};
      return {s.hidden};
    case LayerKind::kRelu:
    case LayerKind::kRelu6:
    case LayerKind::kDropout:
    case LayerKind::kSoftmax:
      return x;
    case LayerKind::kFlatten:
      return {num_elements(x)};
    case LayerKind::kAvgPool:
    case LayerKind::kMaxPool: {
      if (x.size() != 2 && x.size() != 3) {
        throw mismatch("pooling expects [T, C] or [H, W, C], got " + shape_to_string(x));
      }
      if (s.kernel == 0) return {x.back()};
      Shape out = x;
      for (std::size_t d = 0; d + 1 < x.size(); ++d) {
        auto o = window_out(x[d], s.kernel, s.stride, 0);
        if (!o) throw mismatch("pool window larger than input " + shape_to_string(x));
        out[d] = *o;
      }
      return out;
    }
    case LayerKind::kResidualAdd:
      if (in.size() != 2) throw InvalidArgument(where(i, s) + ": expects exactly two inputs");
      if (*in[0] != *in[1]) {
        throw mismatch("branches differ: " + shape_to_string(*in[0]) + " vs " +
                       shape_to_string(*in[1]));
      }
      return x;
    case LayerKind::kConcat: {
      if (in.size() < 2) throw InvalidArgument(where(i, s) + ": expects at least two inputs");
      Shape out = x;
      if (out.empty()) throw mismatch("cannot concatenate scalars");
      for (std::size_t k = 1; k < in.size(); ++k) {
        const Shape& y = *in[k];
        if (y.size() != x.size() || !std::equal(x.begin(), x.end() - 1, y.begin())) {
          throw mismatch("cannot concatenate " + shape_to_string(x) + " with " +
                         shape_to_string(y));
        }
        out.back() += y.back();
      }
      return out;
    }
  }
  throw InvalidArgument(where(i, s) + ": unknown layer kind");
}

}  // namespace

std::vector<Shape> resolve_shapes(const ModelGraph& g) {
  if (g.layers.empty()) throw InvalidArgument("no layers");
  if (g.input_shape.empty() || num_elements(g.input_shape) == 0) {
    throw ShapeError("graph input shape " + shape_to_string(g.input_shape) + " is empty");
  }
  std::vector<Shape> shapes;
  shapes.reserve(g.layers.size());
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    const auto& s = g.layers[i];
    check_positive(i, s);
    std::vector<const Shape*> in;
    for (int p : layer_inputs(g, i)) {
      if (p == kGraphInput) {
        in.push_back(&g.input_shape);
      } else if (p < kGraphInput || p >= static_cast<int>(i)) {
        throw InvalidArgument(where(i, s) + ": input " + std::to_string(p) +
                              " is not an earlier layer (cyclic or forward wiring)");
      } else {
        in.push_back(&shapes[static_cast<std::size_t>(p)]);
      }
    }
    shapes.push_back(infer_shape(i, s, in));
    check_weights(g, i);
  }
  return shapes;
}

ModelGraph validate_graph(ModelGraph g) {
  if (g.weights.layer_count() < g.layers.size()) g.weights.resize(g.layers.size());
  g.resolved_shapes = resolve_shapes(g);
  return g;
}

void init_weights(ModelGraph& g, std::uint64_t seed, double gain) {
  std::mt19937_64 rng(seed);
  g.weights.resize(g.layers.size());
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    const auto& s = g.layers[i];
    if (!is_parameterized(s.kind)) continue;
    const Shape ws = expected_weight_shape(s);
    const std::size_t fan_in = s.kind == LayerKind::kDepthwiseConv2d
                                   ? static_cast<std::size_t>(s.kernel) * s.kernel
                                   : num_elements(ws) / ws.front();
    const double limit = gain * std::sqrt(6.0 / static_cast<double>(fan_in));
    auto fill = [&](Shape shape, double lim) {
      FloatTensor t(std::move(shape));
      std::uniform_real_distribution<double> d(-lim, lim);
      for (auto& v : t.data()) v = static_cast<float>(d(rng));
      return t;
    };
    g.weights.set(i, "weight", fill(ws, limit));
    if (s.kind == LayerKind::kLstm) {
      const double rlim = gain * std::sqrt(6.0 / static_cast<double>(s.hidden));
      g.weights.set(i, "recurrent", fill({4 * static_cast<std::size_t>(s.hidden), s.hidden}, rlim));
    }
    if (s.use_bias) g.weights.set(i, "bias", fill({bias_length(s)}, 0.1 * gain));
  }
}

void zero_weights(ModelGraph& g) {
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    for (const auto& [name, t] : g.weights.layer(i)) {
      auto& m = g.weights.mutable_get(i, name);
      std::fill(m.data().begin(), m.data().end(), 0.0f);
    }
  }
}

}  // namespace herd
