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
#include <span>
#include <vector>

#include "herd/tensor.hpp"

namespace herd {

inline constexpr int kQuantMin = -128;
inline constexpr int kQuantMax = 127;

// Affine map between reals and signed 8-bit integers:
//   q = round(x / scale) + zero_point,   x' = (q - zero_point) * scale
// with round-half-away-from-zero and saturation to [-128, 127].
struct QuantParams {
  double scale = 1.0;
  std::int32_t zero_point = 0;

  // Throws InvalidArgument unless scale > 0 (and finite) and zero_point is
  // inside the int8 range.
  void validate() const;

  friend bool operator==(const QuantParams&, const QuantParams&) = default;
};

class QuantizedTensor {
 public:
  QuantizedTensor() = default;
  QuantizedTensor(Shape shape, std::vector<std::int8_t> data, QuantParams params);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  const QuantParams& params() const { return params_; }
  std::span<const std::int8_t> data() const { return data_; }
  std::span<std::int8_t> data() { return data_; }
  std::int8_t operator[](std::size_t i) const { return data_[i]; }

  friend bool operator==(const QuantizedTensor&, const QuantizedTensor&) = default;

 private:
  Shape shape_;
  std::vector<std::int8_t> data_;
  QuantParams params_;
};

// Calibrates per-tensor parameters from representative data. The observed
// range is widened to include 0 so that the zero point is always
// representable; an all-zero range yields scale 1, zero point 0.
QuantParams compute_quant_params(std::span<const FloatTensor> samples);
QuantParams compute_quant_params(std::span<const float> values);
// Parameters for a known real range [lo, hi]; the same rule as above.
QuantParams quant_params_for_range(double lo, double hi);

// Scalar building blocks, exposed for kernels and tests.
std::int8_t quantize_value(double x, const QuantParams& p);
double dequantize_value(std::int8_t q, const QuantParams& p);
std::int8_t saturate_int8(std::int64_t v);

QuantizedTensor quantize_tensor(const FloatTensor& x, const QuantParams& p);
FloatTensor dequantize_tensor(const QuantizedTensor& q);
QuantizedTensor requantize(const QuantizedTensor& q, const QuantParams& p_new);

}  // namespace herd
