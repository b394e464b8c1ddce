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
#include <string>

#include "herd/error.hpp"
#include "herd/graph.hpp"
#include "kernel_util.hpp"

namespace herd {
namespace {

struct NullObserver {
  void mac(std::size_t) const {}
  void read(std::size_t, std::string_view, std::size_t) const {}
};

struct RefObserver {
  ForwardObserver& o;
  void mac(std::size_t layer) const { o.on_mac(layer); }
  void read(std::size_t layer, std::string_view t, std::size_t i) const {
    o.on_param_read(layer, t, i);
  }
};

float sigmoid(float v) { return 1.0f / (1.0f + std::exp(-v)); }

template <class Obs>
FloatTensor conv2d(const LayerSpec& s, std::size_t li, const FloatTensor& in,
                   const ModelGraph& g, const Shape& out_shape, const Obs& obs) {
  const FloatTensor x = detail::pad_spatial(in, s.padding);
  const auto& w = g.weights.get(li, "weight");
  const FloatTensor* bias = s.use_bias ? &g.weights.get(li, "bias") : nullptr;
  const std::size_t H = x.dim(0), W = x.dim(1), Cin = x.dim(2);
  const std::size_t OH = out_shape[0], OW = out_shape[1], Cout = out_shape[2];
  const std::size_t k = s.kernel;
  FloatTensor out(out_shape);
  (void)H;
  for (std::size_t oy = 0; oy < OH; ++oy) {
    for (std::size_t ox = 0; ox < OW; ++ox) {
      for (std::size_t co = 0; co < Cout; ++co) {
        float acc = 0.0f;
        if (bias) {
          acc = (*bias)[co];
          obs.read(li, "bias", co);
        }
        for (std::size_t ky = 0; ky < k; ++ky) {
          for (std::size_t kx = 0; kx < k; ++kx) {
            const std::size_t xi = ((oy * s.stride + ky) * W + (ox * s.stride + kx)) * Cin;
            const std::size_t wi = ((co * k + ky) * k + kx) * Cin;
            for (std::size_t ci = 0; ci < Cin; ++ci) {
              acc += x[xi + ci] * w[wi + ci];
              obs.mac(li);
              obs.read(li, "weight", wi + ci);
            }
          }
        }
        out[(oy * OW + ox) * Cout + co] = acc;
      }
    }
  }
  return out;
}

template <class Obs>
FloatTensor depthwise(const LayerSpec& s, std::size_t li, const FloatTensor& in,
                      const ModelGraph& g, const Shape& out_shape, const Obs& obs) {
  const FloatTensor x = detail::pad_spatial(in, s.padding);
  const auto& w = g.weights.get(li, "weight");
  const FloatTensor* bias = s.use_bias ? &g.weights.get(li, "bias") : nullptr;
  const std::size_t W = x.dim(1), C = x.dim(2);
  const std::size_t OH = out_shape[0], OW = out_shape[1];
  const std::size_t k = s.kernel;
  FloatTensor out(out_shape);
  for (std::size_t oy = 0; oy < OH; ++oy) {
    for (std::size_t ox = 0; ox < OW; ++ox) {
      for (std::size_t c = 0; c < C; ++c) {
        float acc = 0.0f;
        if (bias) {
          acc = (*bias)[c];
          obs.read(li, "bias", c);
        }
        for (std::size_t ky = 0; ky < k; ++ky) {
          for (std::size_t kx = 0; kx < k; ++kx) {
            const std::size_t xi = ((oy * s.stride + ky) * W + (ox * s.stride + kx)) * C + c;
            const std::size_t wi = (ky * k + kx) * C + c;
            acc += x[xi] * w[wi];
            obs.mac(li);
            obs.read(li, "weight", wi);
          }
        }
        out[(oy * OW + ox) * C + c] = acc;
      }
    }
  }
  return out;
}

// Shared by pointwise convolution and fully connected layers: the input is
// viewed as rows of length Cin.
template <class Obs>
FloatTensor dense_rows(const LayerSpec& s, std::size_t li, const FloatTensor& x,
                       const ModelGraph& g, const Shape& out_shape, const Obs& obs) {
  const auto& w = g.weights.get(li, "weight");
  const FloatTensor* bias = s.use_bias ? &g.weights.get(li, "bias") : nullptr;
  const std::size_t Cin = s.in_channels, Cout = s.out_channels;
  const std::size_t rows = x.size() / Cin;
  FloatTensor out(out_shape);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t co = 0; co < Cout; ++co) {
      float acc = 0.0f;
      if (bias) {
        acc = (*bias)[co];
        obs.read(li, "bias", co);
      }
      for (std::size_t ci = 0; ci < Cin; ++ci) {
        acc += x[r * Cin + ci] * w[co * Cin + ci];
        obs.mac(li);
        obs.read(li, "weight", co * Cin + ci);
      }
      out[r * Cout + co] = acc;
    }
  }
  return out;
}

template <class Obs>
FloatTensor conv1d(const LayerSpec& s, std::size_t li, const FloatTensor& in,
                   const ModelGraph& g, const Shape& out_shape, const Obs& obs) {
  const FloatTensor x = detail::pad_time(in, s.padding);
  const auto& w = g.weights.get(li, "weight");
  const FloatTensor* bias = s.use_bias ? &g.weights.get(li, "bias") : nullptr;
  const std::size_t Cin = x.dim(1);
  const std::size_t OT = out_shape[0], Cout = out_shape[1];
  const std::size_t k = s.kernel;
  FloatTensor out(out_shape);
  for (std::size_t ot = 0; ot < OT; ++ot) {
    for (std::size_t co = 0; co < Cout; ++co) {
      float acc = 0.0f;
      if (bias) {
        acc = (*bias)[co];
        obs.read(li, "bias", co);
      }
      for (std::size_t kt = 0; kt < k; ++kt) {
        const std::size_t xi = (ot * s.stride + kt) * Cin;
        const std::size_t wi = (co * k + kt) * Cin;
        for (std::size_t ci = 0; ci < Cin; ++ci) {
          acc += x[xi + ci] * w[wi + ci];
          obs.mac(li);
          obs.read(li, "weight", wi + ci);
        }
      }
      out[ot * Cout + co] = acc;
    }
  }
  return out;
}

template <class Obs>
FloatTensor lstm(const LayerSpec& s, std::size_t li, const FloatTensor& x,
                 const ModelGraph& g, const Shape& out_shape, const Obs& obs) {
  const auto& wx = g.weights.get(li, "weight");
  const auto& wh = g.weights.get(li, "recurrent");
  const FloatTensor* bias = s.use_bias ? &g.weights.get(li, "bias") : nullptr;
  const std::size_t T = x.dim(0), F = x.dim(1), H = s.hidden;
  std::vector<float> h(H, 0.0f), c(H, 0.0f), gates(4 * H);
  FloatTensor out(out_shape);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t r = 0; r < 4 * H; ++r) {
      float acc = 0.0f;
      if (bias) {
        acc = (*bias)[r];
        obs.read(li, "bias", r);
      }
      for (std::size_t f = 0; f < F; ++f) {
        acc += wx[r * F + f] * x[t * F + f];
        obs.mac(li);
        obs.read(li, "weight", r * F + f);
      }
      for (std::size_t j = 0; j < H; ++j) {
        acc += wh[r * H + j] * h[j];
        obs.mac(li);
        obs.read(li, "recurrent", r * H + j);
      }
      gates[r] = acc;
    }
    for (std::size_t j = 0; j < H; ++j) {
      const float i_gate = sigmoid(gates[j]);
      const float f_gate = sigmoid(gates[H + j]);
      const float g_gate = std::tanh(gates[2 * H + j]);
      const float o_gate = sigmoid(gates[3 * H + j]);
      c[j] = f_gate * c[j] + i_gate * g_gate;
      h[j] = o_gate * std::tanh(c[j]);
    }
    if (s.return_sequences) std::copy(h.begin(), h.end(), out.data().begin() + t * H);
  }
  if (!s.return_sequences) std::copy(h.begin(), h.end(), out.data().begin());
  return out;
}

FloatTensor pool(const LayerSpec& s, const FloatTensor& x, const Shape& out_shape) {
  const bool is_max = s.kind == LayerKind::kMaxPool;
  FloatTensor out(out_shape);
  const std::size_t C = x.shape().back();
  if (s.kernel == 0) {
    const std::size_t n = x.size() / C;
    for (std::size_t c = 0; c < C; ++c) {
      float acc = is_max ? x[c] : 0.0f;
      for (std::size_t p = 0; p < n; ++p) {
        const float v = x[p * C + c];
        acc = is_max ? std::max(acc, v) : acc + v;
      }
      out[c] = is_max ? acc : acc / static_cast<float>(n);
    }
    return out;
  }
  const std::size_t k = s.kernel;
  const bool two_d = x.rank() == 3;
  const std::size_t OH = out_shape[0], OW = two_d ? out_shape[1] : 1;
  const std::size_t W = two_d ? x.dim(1) : 1;
  const std::size_t kw = two_d ? k : 1;
  const std::size_t sw = two_d ? s.stride : 1;
  const float inv = 1.0f / static_cast<float>(k * kw);
  for (std::size_t oy = 0; oy < OH; ++oy) {
    for (std::size_t ox = 0; ox < OW; ++ox) {
      for (std::size_t c = 0; c < C; ++c) {
        float acc = is_max ? -INFINITY : 0.0f;
        for (std::size_t ky = 0; ky < k; ++ky) {
          for (std::size_t kx = 0; kx < kw; ++kx) {
            const float v = x[((oy * s.stride + ky) * W + (ox * sw + kx)) * C + c];
            acc = is_max ? std::max(acc, v) : acc + v;
          }
        }
        out[(oy * OW + ox) * C + c] = is_max ? acc : acc * inv;
      }
    }
  }
  return out;
}

FloatTensor softmax_last(const FloatTensor& x) {
  FloatTensor out(x.shape());
  const std::size_t C = x.shape().back();
  for (std::size_t r = 0; r < x.size() / C; ++r) {
    float m = x[r * C];
    for (std::size_t c = 1; c < C; ++c) m = std::max(m, x[r * C + c]);
    double sum = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      const float e = std::exp(x[r * C + c] - m);
      out[r * C + c] = e;
      sum += e;
    }
    for (std::size_t c = 0; c < C; ++c) {
      out[r * C + c] = static_cast<float>(out[r * C + c] / sum);
    }
  }
  return out;
}

template <class Obs>
std::vector<FloatTensor> run(const ModelGraph& g, const FloatTensor& x, const Obs& obs) {
  const auto shapes = g.resolved_shapes.size() == g.layers.size() ? g.resolved_shapes
                                                                   : resolve_shapes(g);
  if (x.shape() != g.input_shape) {
    throw ShapeError("input shape " + shape_to_string(x.shape()) + " does not match graph input " +
                     shape_to_string(g.input_shape));
  }
  std::vector<FloatTensor> outs;
  outs.reserve(g.layers.size());
  auto producer = [&](int p) -> const FloatTensor& {
    return p == kGraphInput ? x : outs[static_cast<std::size_t>(p)];
  };
  for (std::size_t li = 0; li < g.layers.size(); ++li) {
    const auto& s = g.layers[li];
    const auto in_idx = layer_inputs(g, li);
    const FloatTensor& in = producer(in_idx.front());
    const Shape& os = shapes[li];
    FloatTensor y;
    switch (s.kind) {
      case LayerKind::kConv2d: y = conv2d(s, li, in, g, os, obs); break;
      case LayerKind::kDepthwiseConv2d: y = depthwise(s, li, in, g, os, obs); break;
      case LayerKind::kPointwiseConv2d:
      case LayerKind::kFullyConnected: y = dense_rows(s, li, in, g, os, obs); break;
      case LayerKind::kConv1d: y = conv1d(s, li, in, g, os, obs); break;
      case LayerKind::kLstm: y = lstm(s, li, in, g, os, obs); break;
      case LayerKind::kRelu:
        y = in;
        for (auto& v : y.data()) v = std::max(v, 0.0f);
        break;
      case LayerKind::kRelu6:
        y = in;
        for (auto& v : y.data()) v = std::clamp(v, 0.0f, 6.0f);
        break;
      case LayerKind::kDropout:
        y = in;
        break;
      case LayerKind::kFlatten:
        y = in.reshaped(os);
        break;
      case LayerKind::kAvgPool:
      case LayerKind::kMaxPool: y = pool(s, in, os); break;
      case LayerKind::kSoftmax: y = softmax_last(in); break;
      case LayerKind::kResidualAdd: {
        y = in;
        const FloatTensor& other = producer(in_idx[1]);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += other[i];
        break;
      }
      case LayerKind::kConcat: {
        std::vector<const FloatTensor*> parts;
        for (int p : in_idx) parts.push_back(&producer(p));
        y = detail::concat_last(parts, os);
        break;
      }
    }
    if (!y.all_finite()) {
      throw Error("non-finite value produced by layer " + std::to_string(li) + " (" +
                  std::string(layer_kind_name(s.kind)) + ")");
    }
    outs.push_back(std::move(y));
  }
  return outs;
}

}  // namespace

FloatTensor forward_float(const ModelGraph& g, const FloatTensor& x, ForwardObserver* observer) {
  if (observer != nullptr) return std::move(run(g, x, RefObserver{*observer}).back());
  return std::move(run(g, x, NullObserver{}).back());
}

std::vector<FloatTensor> forward_float_all(const ModelGraph& g, const FloatTensor& x) {
  return run(g, x, NullObserver{});
}

}  // namespace herd
