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

#include "herd/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "herd/error.hpp"

namespace herd {

std::size_t num_elements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

FloatTensor::FloatTensor(Shape shape)
    : shape_(std::move(shape)), data_(num_elements(shape_), 0.0f) {}

FloatTensor::FloatTensor(Shape shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != num_elements(shape_)) {
    throw ShapeError("tensor data has " + std::to_string(data_.size()) +
                     " elements, shape " + shape_to_string(shape_) + " needs " +
                     std::to_string(num_elements(shape_)));
  }
}

FloatTensor FloatTensor::reshaped(Shape shape) const {
  return FloatTensor(std::move(shape), data_);
}

bool FloatTensor::all_finite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace herd
