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

#include <vector>

#include "herd/tensor.hpp"

namespace herd::detail {

// Zero padding of the two spatial axes of an [H, W, C] tensor.
FloatTensor pad_spatial(const FloatTensor& x, std::uint32_t pad);
// Zero padding of the time axis of a [T, C] tensor.
FloatTensor pad_time(const FloatTensor& x, std::uint32_t pad);
FloatTensor concat_last(const std::vector<const FloatTensor*>& parts, const Shape& out_shape);

}  // namespace herd::detail
