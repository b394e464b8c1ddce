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

#include "herd/quant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "herd/error.hpp"

namespace herd {

void QuantParams::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("quant scale must be positive and finite, got " +
                          std::to_string(scale));
  }
  if (zero_point < kQuantMin || zero_point > kQuantMax) {
    throw InvalidArgument("quant zero_point out of int8 range: " +
                          std::to_string(zero_point));
  }
}

QuantizedTensor::QuantizedTensor(Shape shape, std::vector<std::int8_t> data,
                                 QuantParams params)
    : shape_(std::move(shape)), data_(std::move(data)), params_(params) {
  params_.validate();
  if (data_.size() != num_elements(shape_)) {
    throw ShapeError("quantized tensor data has " + std::to_string(data_.size()) +
                     " elements, shape " + shape_to_string(shape_) + " needs " +
                     std::to_string(num_elements(shape_)));
  }
}

QuantParams quant_params_for_range(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw InvalidArgument("invalid calibration range");
  }
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  if (hi == lo) return QuantParams{1.0, 0};
  QuantParams p;
  p.scale = (hi - lo) / static_cast<double>(kQuantMax - kQuantMin);
  const double zp = std::round(static_cast<double>(kQuantMin) - lo / p.scale);
  p.zero_point = static_cast<std::int32_t>(
      std::clamp(zp, static_cast<double>(kQuantMin), static_cast<double>(kQuantMax)));
  return p;
}

QuantParams compute_quant_params(std::span<const float> values) {
  if (values.empty()) throw InvalidArgument("calibration set is empty");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (float v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("calibration sample is not finite");
    lo = std::min(lo, static_cast<double>(v));
    hi = std::max(hi, static_cast<double>(v));
  }
  return quant_params_for_range(lo, hi);
}

QuantParams compute_quant_params(std::span<const FloatTensor> samples) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t seen = 0;
  for (const auto& t : samples) {
    for (float v : t.data()) {
      if (!std::isfinite(v)) throw InvalidArgument("calibration sample is not finite");
      lo = std::min(lo, static_cast<double>(v));
      hi = std::max(hi, static_cast<double>(v));
      ++seen;
    }
  }
  if (seen == 0) throw InvalidArgument("calibration set is empty");
  return quant_params_for_range(lo, hi);
}

std::int8_t saturate_int8(std::int64_t v) {
  return static_cast<std::int8_t>(std::clamp<std::int64_t>(v, kQuantMin, kQuantMax));
}

std::int8_t quantize_value(double x, const QuantParams& p) {
  // std::round is half-away-from-zero.
  const double r = std::round(x / p.scale) + p.zero_point;
  if (r <= kQuantMin) return static_cast<std::int8_t>(kQuantMin);
  if (r >= kQuantMax) return static_cast<std::int8_t>(kQuantMax);
  return static_cast<std::int8_t>(r);
}

double dequantize_value(std::int8_t q, const QuantParams& p) {
  return (static_cast<double>(q) - p.zero_point) * p.scale;
}

QuantizedTensor quantize_tensor(const FloatTensor& x, const QuantParams& p) {
  p.validate();
  std::vector<std::int8_t> out(x.size());
  const auto in = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(in[i])) throw InvalidArgument("cannot quantize a non-finite value");
    out[i] = quantize_value(in[i], p);
  }
  return QuantizedTensor(x.shape(), std::move(out), p);
}

FloatTensor dequantize_tensor(const QuantizedTensor& q) {
  std::vector<float> out(q.size());
  const auto in = q.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(dequantize_value(in[i], q.params()));
  }
  return FloatTensor(q.shape(), std::move(out));
}

QuantizedTensor requantize(const QuantizedTensor& q, const QuantParams& p_new) {
  p_new.validate();
  if (q.params() == p_new) return q;
  std::vector<std::int8_t> out(q.size());
  const auto in = q.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    // Round through float32 so the result matches dequantize -> quantize.
    const float real = static_cast<float>(dequantize_value(in[i], q.params()));
    out[i] = quantize_value(real, p_new);
  }
  return QuantizedTensor(q.shape(), std::move(out), p_new);
}

}  // namespace herd
