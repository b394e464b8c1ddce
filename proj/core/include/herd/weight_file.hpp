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
#include <filesystem>
#include <span>
#include <vector>

#include "herd/graph.hpp"

namespace herd {

inline constexpr std::uint16_t kWeightFileVersion = 1;

// Binary ".herd" model container; the byte layout is documented in
// docs/weight_format.md. Decoding validates magic, version and every length,
// then runs validate_graph on the result. When activation quant params are
// present the quantized weight shadow is rebuilt.
std::vector<std::uint8_t> encode_weight_file(const ModelGraph& g);
ModelGraph decode_weight_file(std::span<const std::uint8_t> bytes);

void save_weight_file(const ModelGraph& g, const std::filesystem::path& path);
ModelGraph load_weight_file(const std::filesystem::path& path);

}  // namespace herd
