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
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>

#include "herd/error.hpp"
#include "herd/graph.hpp"

namespace herd {
namespace {

constexpr QuantParams kSoftmaxParams{1.0 / 256.0, -128};

QuantParams lstm_state_params() { return quant_params_for_range(-1.0, 1.0); }

bool passes_input_params(LayerKind k) {
  switch (k) {
    case LayerKind::kRelu:
    case LayerKind::kRelu6:
    case LayerKind::kDropout:
    case LayerKind::kFlatten:
    case LayerKind::kMaxPool:
    case LayerKind::kAvgPool:
      return true;
    default:
      return false;
  }
}

std::size_t fan_in(const LayerSpec& s) {
  switch (s.kind) {
    case LayerKind::kConv2d: return static_cast<std::size_t>(s.kernel) * s.kernel * s.in_channels;
    case LayerKind::kDepthwiseConv2d: return static_cast<std::size_t>(s.kernel) * s.kernel;
    case LayerKind::kConv1d: return static_cast<std::size_t>(s.kernel) * s.in_channels;
    case LayerKind::kLstm: return std::max<std::size_t>(s.in_channels, s.hidden);
    default: return s.in_channels;
  }
}

QuantizedLayerWeights quantize_layer(const ModelGraph& g, std::size_t li, const QuantParams& in) {
  const auto& s = g.layers[li];
  const auto& w = g.weights.get(li, "weight");
  QuantizedLayerWeights q;
  q.weight = quantize_tensor(w, compute_quant_params(w.data()));
  if (s.kind == LayerKind::kLstm) {
    const auto& r = g.weights.get(li, "recurrent");
    q.recurrent = quantize_tensor(r, compute_quant_params(r.data()));
  }
  const double bias_scale = in.scale * q.weight.params().scale;
  std::int64_t max_bias = 0;
  if (s.use_bias) {
    const auto& b = g.weights.get(li, "bias");
    q.bias.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double v = std::round(static_cast<double>(b[i]) / bias_scale);
      if (std::abs(v) > static_cast<double>(std::numeric_limits<std::int32_t>::max())) {
        throw InvalidArgument("layer " + std::to_string(li) +
                              ": bias does not fit int32 at the calibrated scale");
      }
      q.bias[i] = static_cast<std::int32_t>(v);
      max_bias = std::max<std::int64_t>(max_bias, std::llabs(q.bias[i]));
    }
  }
  const std::int64_t bound = static_cast<std::int64_t>(fan_in(s)) * 255 * 255 + max_bias;
  q.wide_accumulator = bound > std::numeric_limits<std::int32_t>::max();
  return q;
}

// ---------------------------------------------------------------------------
// Integer kernels

std::int8_t requant_acc(std::int64_t acc, double multiplier, std::int32_t zero_point) {
  return saturate_int8(static_cast<std::int64_t>(std::round(static_cast<double>(acc) * multiplier)) +
                       zero_point);
}

// Pads with the zero point, i.e. with real zero.
std::vector<std::int8_t> pad_q(const QuantizedTensor& x, std::uint32_t pad, bool spatial,
                               Shape& padded_shape) {
  padded_shape = x.shape();
  const auto zp = static_cast<std::int8_t>(x.params().zero_point);
  if (pad == 0) return {x.data().begin(), x.data().end()};
  if (spatial) {
    const std::size_t H = x.shape()[0], W = x.shape()[1], C = x.shape()[2];
    const std::size_t PW = W + 2 * pad;
    padded_shape = {H + 2 * pad, PW, C};
    std::vector<std::int8_t> out(num_elements(padded_shape), zp);
    for (std::size_t y = 0; y < H; ++y) {
      std::copy_n(x.data().begin() + y * W * C, W * C, out.begin() + ((y + pad) * PW + pad) * C);
    }
    return out;
  }
  const std::size_t T = x.shape()[0], C = x.shape()[1];
  padded_shape = {T + 2 * pad, C};
  std::vector<std::int8_t> out(num_elements(padded_shape), zp);
  std::copy_n(x.data().begin(), T * C, out.begin() + pad * C);
  return out;
}

struct IntContext {
  const LayerSpec& s;
  const QuantizedLayerWeights& w;
  const QuantizedTensor& x;
  const Shape& out_shape;
  QuantParams out_params;

  double multiplier() const {
    return x.params().scale * w.weight.params().scale / out_params.scale;
  }
  std::int32_t bias(std::size_t i) const { return w.bias.empty() ? 0 : w.bias[i]; }
};

template <class Acc>
QuantizedTensor conv2d_q(const IntContext& c) {
  Shape ps;
  const auto x = pad_q(c.x, c.s.padding, true, ps);
  const std::int32_t zx = c.x.params().zero_point, zw = c.w.weight.params().zero_point;
  const auto w = c.w.weight.data();
  const std::size_t W = ps[1], Cin = ps[2];
  const std::size_t OH = c.out_shape[0], OW = c.out_shape[1], Cout = c.out_shape[2];
  const std::size_t k = c.s.kernel;
  const double m = c.multiplier();
  std::vector<std::int8_t> out(num_elements(c.out_shape));
  for (std::size_t oy = 0; oy < OH; ++oy) {
    for (std::size_t ox = 0; ox < OW; ++ox) {
      for (std::size_t co = 0; co < Cout; ++co) {
        Acc acc = c.bias(co);
        for (std::size_t ky = 0; ky < k; ++ky) {
          for (std::size_t kx = 0; kx < k; ++kx) {
            const std::size_t xi = ((oy * c.s.stride + ky) * W + (ox * c.s.stride + kx)) * Cin;
            const std::size_t wi = ((co * k + ky) * k + kx) * Cin;
            for (std::size_t ci = 0; ci < Cin; ++ci) {
              acc += static_cast<Acc>(x[xi + ci] - zx) * static_cast<Acc>(w[wi + ci] - zw);
            }
          }
        }
        out[(oy * OW + ox) * Cout + co] = requant_acc(acc, m, c.out_params.zero_point);
      }
    }
  }
  return QuantizedTensor(c.out_shape, std::move(out), c.out_params);
}

template <class Acc>
QuantizedTensor depthwise_q(const IntContext& c) {
  Shape ps;
  const auto x = pad_q(c.x, c.s.padding, true, ps);
  const std::int32_t zx = c.x.params().zero_point, zw = c.w.weight.params().zero_point;
  const auto w = c.w.weight.data();
  const std::size_t W = ps[1], C = ps[2];
  const std::size_t OH = c.out_shape[0], OW = c.out_shape[1];
  const std::size_t k = c.s.kernel;
  const double m = c.multiplier();
  std::vector<std::int8_t> out(num_elements(c.out_shape));
  for (std::size_t oy = 0; oy < OH; ++oy) {
    for (std::size_t ox = 0; ox < OW; ++ox) {
      for (std::size_t ch = 0; ch < C; ++ch) {
        Acc acc = c.bias(ch);
        for (std::size_t ky = 0; ky < k; ++ky) {
          for (std::size_t kx = 0; kx < k; ++kx) {
            const std::size_t xi = ((oy * c.s.stride + ky) * W + (ox * c.s.stride + kx)) * C + ch;
            acc += static_cast<Acc>(x[xi] - zx) * static_cast<Acc>(w[(ky * k + kx) * C + ch] - zw);
          }
        }
        out[(oy * OW + ox) * C + ch] = requant_acc(acc, m, c.out_params.zero_point);
      }
    }
  }
  return QuantizedTensor(c.out_shape, std::move(out), c.out_params);
}

template <class Acc>
QuantizedTensor dense_q(const IntContext& c) {
  const std::int32_t zx = c.x.params().zero_point, zw = c.w.weight.params().zero_point;
  const auto x = c.x.data();
  const auto w = c.w.weight.data();
  const std::size_t Cin = c.s.in_channels, Cout = c.s.out_channels;
  const std::size_t rows = x.size() / Cin;
  const double m = c.multiplier();
  std::vector<std::int8_t> out(num_elements(c.out_shape));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t co = 0; co < Cout; ++co) {
      Acc acc = c.bias(co);
      for (std::size_t ci = 0; ci < Cin; ++ci) {
        acc += static_cast<Acc>(x[r * Cin + ci] - zx) * static_cast<Acc>(w[co * Cin + ci] - zw);
      }
      out[r * Cout + co] = requant_acc(acc, m, c.out_params.zero_point);
    }
  }
  return QuantizedTensor(c.out_shape, std::move(out), c.out_params);
}

template <class Acc>
QuantizedTensor conv1d_q(const IntContext& c) {
  Shape ps;
  const auto x = pad_q(c.x, c.s.padding, false, ps);
  const std::int32_t zx = c.x.params().zero_point, zw = c.w.weight.params().zero_point;
  const auto w = c.w.weight.data();
  const std::size_t Cin = ps[1];
  const std::size_t OT = c.out_shape[0], Cout = c.out_shape[1];
  const std::size_t k = c.s.kernel;
  const double m = c.multiplier();
  std::vector<std::int8_t> out(num_elements(c.out_shape));
  for (std::size_t ot = 0; ot < OT; ++ot) {
    for (std::size_t co = 0; co < Cout; ++co) {
      Acc acc = c.bias(co);
      for (std::size_t kt = 0; kt < k; ++kt) {
        const std::size_t xi = (ot * c.s.stride + kt) * Cin;
        const std::size_t wi = (co * k + kt) * Cin;
        for (std::size_t ci = 0; ci < Cin; ++ci) {
          acc += static_cast<Acc>(x[xi + ci] - zx) * static_cast<Acc>(w[wi + ci] - zw);
        }
      }
      out[ot * Cout + co] = requant_acc(acc, m, c.out_params.zero_point);
    }
  }
  return QuantizedTensor(c.out_shape, std::move(out), c.out_params);
}

// Gate pre-activations come from two integer accumulators (input and
// recurrent paths); the nonlinearities and the cell state run in float.
template <class Acc>
QuantizedTensor lstm_q(const IntContext& c) {
  const QuantParams hp = lstm_state_params();
  const auto& rq = *c.w.recurrent;
  const std::int32_t zx = c.x.params().zero_point, zw = c.w.weight.params().zero_point;
  const std::int32_t zr = rq.params().zero_point;
  const double sx_w = c.x.params().scale * c.w.weight.params().scale;
  const double sh_r = hp.scale * rq.params().scale;
  const auto x = c.x.data();
  const auto wx = c.w.weight.data();
  const auto wh = rq.data();
  const std::size_t T = c.x.shape()[0], F = c.x.shape()[1], H = c.s.hidden;
  std::vector<std::int8_t> hq(H, static_cast<std::int8_t>(hp.zero_point));
  std::vector<double> cell(H, 0.0), gates(4 * H);
  std::vector<std::int8_t> out(num_elements(c.out_shape));
  auto sigmoid = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t r = 0; r < 4 * H; ++r) {
      Acc ax = c.bias(r);
      for (std::size_t f = 0; f < F; ++f) {
        ax += static_cast<Acc>(x[t * F + f] - zx) * static_cast<Acc>(wx[r * F + f] - zw);
      }
      Acc ah = 0;
      for (std::size_t j = 0; j < H; ++j) {
        ah += static_cast<Acc>(hq[j] - hp.zero_point) * static_cast<Acc>(wh[r * H + j] - zr);
      }
      gates[r] = static_cast<double>(ax) * sx_w + static_cast<double>(ah) * sh_r;
    }
    for (std::size_t j = 0; j < H; ++j) {
      const double i_gate = sigmoid(gates[j]);
      const double f_gate = sigmoid(gates[H + j]);
      const double g_gate = std::tanh(gates[2 * H + j]);
      const double o_gate = sigmoid(gates[3 * H + j]);
      cell[j] = f_gate * cell[j] + i_gate * g_gate;
      hq[j] = quantize_value(o_gate * std::tanh(cell[j]), hp);
    }
    if (c.s.return_sequences) std::copy(hq.begin(), hq.end(), out.begin() + t * H);
  }
  if (!c.s.return_sequences) std::copy(hq.begin(), hq.end(), out.begin());
  QuantizedTensor y(c.out_shape, std::move(out), hp);
  return c.out_params == hp ? y : requantize(y, c.out_params);
}

template <class Acc>
QuantizedTensor parameterized_q(const IntContext& c) {
  switch (c.s.kind) {
    case LayerKind::kConv2d: return conv2d_q<Acc>(c);
    case LayerKind::kDepthwiseConv2d: return depthwise_q<Acc>(c);
    case LayerKind::kConv1d: return conv1d_q<Acc>(c);
    case LayerKind::kLstm: return lstm_q<Acc>(c);
    default: return dense_q<Acc>(c);
  }
}

std::int64_t round_div(std::int64_t num, std::int64_t den) {
  const std::int64_t half = den / 2;
  return num >= 0 ? (num + half) / den : -((-num + half) / den);
}

QuantizedTensor pool_q(const LayerSpec& s, const QuantizedTensor& x, const Shape& out_shape) {
  const bool is_max = s.kind == LayerKind::kMaxPool;
  const std::int32_t z = x.params().zero_point;
  const std::size_t C = x.shape().back();
  std::vector<std::int8_t> out(num_elements(out_shape));
  if (s.kernel == 0) {
    const std::size_t n = x.size() / C;
    for (std::size_t c = 0; c < C; ++c) {
      std::int64_t acc = is_max ? x[c] : 0;
      for (std::size_t p = 0; p < n; ++p) {
        const std::int64_t v = x[p * C + c];
        acc = is_max ? std::max(acc, v) : acc + (v - z);
      }
      out[c] = is_max ? static_cast<std::int8_t>(acc)
                      : saturate_int8(round_div(acc, static_cast<std::int64_t>(n)) + z);
    }
    return QuantizedTensor(out_shape, std::move(out), x.params());
  }
  const std::size_t k = s.kernel;
  const bool two_d = x.shape().size() == 3;
  const std::size_t OH = out_shape[0], OW = two_d ? out_shape[1] : 1;
  const std::size_t W = two_d ? x.shape()[1] : 1;
  const std::size_t kw = two_d ? k : 1;
  const std::size_t sw = two_d ? s.stride : 1;
  const auto n = static_cast<std::int64_t>(k * kw);
  for (std::size_t oy = 0; oy < OH; ++oy) {
    for (std::size_t ox = 0; ox < OW; ++ox) {
      for (std::size_t c = 0; c < C; ++c) {
        std::int64_t acc = is_max ? kQuantMin : 0;
        for (std::size_t ky = 0; ky < k; ++ky) {
          for (std::size_t kx = 0; kx < kw; ++kx) {
            const std::int64_t v = x[((oy * s.stride + ky) * W + (ox * sw + kx)) * C + c];
            acc = is_max ? std::max(acc, v) : acc + (v - z);
          }
        }
        out[(oy * OW + ox) * C + c] =
            is_max ? static_cast<std::int8_t>(acc) : saturate_int8(round_div(acc, n) + z);
      }
    }
  }
  return QuantizedTensor(out_shape, std::move(out), x.params());
}

}  // namespace

ModelGraph calibrate(ModelGraph g, std::span<const FloatTensor> representative) {
  g = validate_graph(std::move(g));
  if (representative.empty()) throw InvalidArgument("calibration set is empty");
  g.input_quant = compute_quant_params(representative);
  const std::size_t n = g.layers.size();
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  for (const auto& x : representative) {
    const auto outs = forward_float_all(g, x);
    for (std::size_t i = 0; i < n; ++i) {
      for (float v : outs[i].data()) {
        lo[i] = std::min(lo[i], static_cast<double>(v));
        hi[i] = std::max(hi[i], static_cast<double>(v));
      }
    }
  }
  // A producer whose only consumer is relu/relu6 takes the activation's range,
  // as a fused conv+relu would: the negative half of the grid is never used.
  std::vector<std::vector<std::size_t>> consumers(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (int p : layer_inputs(g, j)) {
      if (p != kGraphInput) consumers[static_cast<std::size_t>(p)].push_back(j);
    }
  }
  auto fused_activation = [&](std::size_t i) -> std::optional<std::size_t> {
    if (consumers[i].size() != 1) return std::nullopt;
    const std::size_t j = consumers[i].front();
    const auto k = g.layers[j].kind;
    if (k == LayerKind::kRelu || k == LayerKind::kRelu6) return j;
    return std::nullopt;
  };
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = g.layers[i];
    const int first = layer_inputs(g, i).front();
    const QuantParams in = first == kGraphInput ? *g.input_quant
                                                : *g.layers[static_cast<std::size_t>(first)].output_quant;
    if (passes_input_params(s.kind)) {
      s.output_quant = in;
    } else if (s.kind == LayerKind::kSoftmax) {
      s.output_quant = kSoftmaxParams;
    } else if (s.kind == LayerKind::kLstm) {
      s.output_quant = lstm_state_params();
    } else if (const auto act = fused_activation(i)) {
      s.output_quant = quant_params_for_range(lo[*act], hi[*act]);
    } else {
      s.output_quant = quant_params_for_range(lo[i], hi[i]);
    }
  }
  return quantize_weights(std::move(g));
}

ModelGraph quantize_weights(ModelGraph g) {
  if (!g.input_quant) throw InvalidArgument("graph has no input quant params");
  g.weights.resize(g.layers.size());
  g.weights.clear_quantized();
  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    if (!g.layers[i].output_quant) {
      throw InvalidArgument("layer " + std::to_string(i) + " has no output quant params");
    }
    if (!is_parameterized(g.layers[i].kind)) continue;
    const int first = layer_inputs(g, i).front();
    const QuantParams in = first == kGraphInput
                               ? *g.input_quant
                               : *g.layers[static_cast<std::size_t>(first)].output_quant;
    g.weights.set_quantized(i, quantize_layer(g, i, in));
  }
  return g;
}

QuantizedTensor forward_int8(const ModelGraph& g, const QuantizedTensor& input) {
  if (!g.is_quantized()) {
    throw InvalidArgument("graph is missing quant params; calibrate it before forward_int8");
  }
  const auto shapes = g.resolved_shapes.size() == g.layers.size() ? g.resolved_shapes
                                                                   : resolve_shapes(g);
  if (input.shape() != g.input_shape) {
    throw ShapeError("input shape " + shape_to_string(input.shape()) +
                     " does not match graph input " + shape_to_string(g.input_shape));
  }
  const QuantizedTensor x = requantize(input, *g.input_quant);
  std::vector<QuantizedTensor> outs;
  outs.reserve(g.layers.size());
  auto producer = [&](int p) -> const QuantizedTensor& {
    return p == kGraphInput ? x : outs[static_cast<std::size_t>(p)];
  };
  for (std::size_t li = 0; li < g.layers.size(); ++li) {
    const auto& s = g.layers[li];
    const auto in_idx = layer_inputs(g, li);
    const QuantizedTensor& in = producer(in_idx.front());
    const Shape& os = shapes[li];
    const QuantParams op = *s.output_quant;
    QuantizedTensor y;
    switch (s.kind) {
      case LayerKind::kConv2d:
      case LayerKind::kDepthwiseConv2d:
      case LayerKind::kPointwiseConv2d:
      case LayerKind::kConv1d:
      case LayerKind::kFullyConnected:
      case LayerKind::kLstm: {
        const auto* qw = g.weights.quantized(li);
        const IntContext ctx{s, *qw, in, os, op};
        y = qw->wide_accumulator ? parameterized_q<std::int64_t>(ctx)
                                 : parameterized_q<std::int32_t>(ctx);
        break;
      }
      case LayerKind::kRelu:
      case LayerKind::kRelu6: {
        const auto z = static_cast<std::int8_t>(in.params().zero_point);
        const std::int8_t top = s.kind == LayerKind::kRelu6 ? quantize_value(6.0, in.params())
                                                            : static_cast<std::int8_t>(kQuantMax);
        std::vector<std::int8_t> v(in.data().begin(), in.data().end());
        for (auto& q : v) q = std::clamp(q, z, std::max(z, top));
        y = requantize(QuantizedTensor(os, std::move(v), in.params()), op);
        break;
      }
      case LayerKind::kDropout:
      case LayerKind::kFlatten:
        y = requantize(QuantizedTensor(os, {in.data().begin(), in.data().end()}, in.params()), op);
        break;
      case LayerKind::kAvgPool:
      case LayerKind::kMaxPool:
        y = requantize(pool_q(s, in, os), op);
        break;
      case LayerKind::kSoftmax: {
        const FloatTensor real = dequantize_tensor(in);
        const std::size_t C = os.back();
        FloatTensor sm(os);
        for (std::size_t r = 0; r < real.size() / C; ++r) {
          double m = real[r * C];
          for (std::size_t c = 1; c < C; ++c) m = std::max<double>(m, real[r * C + c]);
          double sum = 0.0;
          for (std::size_t c = 0; c < C; ++c) sum += std::exp(real[r * C + c] - m);
          for (std::size_t c = 0; c < C; ++c) {
            sm[r * C + c] = static_cast<float>(std::exp(real[r * C + c] - m) / sum);
          }
        }
        y = quantize_tensor(sm, op);
        break;
      }
      case LayerKind::kResidualAdd: {
        const QuantizedTensor& other = producer(in_idx[1]);
        const double ma = in.params().scale / op.scale;
        const double mb = other.params().scale / op.scale;
        std::vector<std::int8_t> v(in.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double r = (in[i] - in.params().zero_point) * ma +
                           (other[i] - other.params().zero_point) * mb;
          v[i] = saturate_int8(static_cast<std::int64_t>(std::round(r)) + op.zero_point);
        }
        y = QuantizedTensor(os, std::move(v), op);
        break;
      }
      case LayerKind::kConcat: {
        const std::size_t Cout = os.back();
        const std::size_t rows = num_elements(os) / Cout;
        std::vector<std::int8_t> v(num_elements(os));
        std::size_t offset = 0;
        for (int p : in_idx) {
          const QuantizedTensor part = requantize(producer(p), op);
          const std::size_t C = part.shape().back();
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < C; ++c) v[r * Cout + offset + c] = part[r * C + c];
          }
          offset += C;
        }
        y = QuantizedTensor(os, std::move(v), op);
        break;
      }
    }
    outs.push_back(std::move(y));
  }
  return std::move(outs.back());
}

}  // namespace herd
