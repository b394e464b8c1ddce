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

#include "kernel_util.hpp"

#include <algorithm>

namespace herd::detail {

FloatTensor pad_spatial(const FloatTensor& x, std::uint32_t pad) {
  if (pad == 0) return x;
  const std::size_t H = x.dim(0), W = x.dim(1), C = x.dim(2);
  const std::size_t PH = H + 2 * pad, PW = W + 2 * pad;
  FloatTensor out({PH, PW, C});
  for (std::size_t y = 0; y < H; ++y) {
    const auto src = x.data().subspan(y * W * C, W * C);
    std::copy(src.begin(), src.end(), out.data().begin() + ((y + pad) * PW + pad) * C);
  }
  return out;
}

FloatTensor pad_time(const FloatTensor& x, std::uint32_t pad) {
  if (pad == 0) return x;
  const std::size_t T = x.dim(0), C = x.dim(1);
  FloatTensor out({T + 2 * pad, C});
  std::copy(x.data().begin(), x.data().end(), out.data().begin() + pad * C);
  return out;
}

FloatTensor concat_last(const std::vector<const FloatTensor*>& parts, const Shape& out_shape) {
  FloatTensor out(out_shape);
  const std::size_t Cout = out_shape.back();
  const std::size_t rows = out.size() / Cout;
  std::size_t offset = 0;
  for (const FloatTensor* p : parts) {
    const std::size_t C = p->shape().back();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < C; ++c) out[r * Cout + offset + c] = (*p)[r * C + c];
    }
    offset += C;
  }
  return out;
}

}  // namespace herd::detail
