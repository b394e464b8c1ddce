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

#include "herd/weight_file.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <string>

#include "herd/bytes.hpp"
#include "herd/error.hpp"

namespace herd {
namespace {

constexpr std::array<char, 4> kMagic = {'H', 'E', 'R', 'D'};
constexpr std::uint32_t kInputRef = 0xFFFFFFFFu;
constexpr std::array<const char*, 3> kTensorNames = {"weight", "bias", "recurrent"};

enum ParamFlags : std::uint32_t { kUseBias = 1u << 0, kReturnSequences = 1u << 1 };

std::uint8_t tensor_id(const std::string& name) {
  for (std::size_t i = 0; i < kTensorNames.size(); ++i) {
    if (name == kTensorNames[i]) return static_cast<std::uint8_t>(i);
  }
  throw InvalidArgument("tensor '" + name + "' has no weight-file id");
}

void write_quant(ByteWriter& w, const std::optional<QuantParams>& q) {
  w.u8(q ? 1 : 0);
  if (q) {
    w.f32(static_cast<float>(q->scale));
    w.i32(q->zero_point);
  }
}

std::optional<QuantParams> read_quant(ByteReader& r) {
  const std::uint8_t flag = r.u8();
  if (flag > 1) throw FormatError("bad quant flag " + std::to_string(flag));
  if (flag == 0) return std::nullopt;
  QuantParams q;
  q.scale = r.f32();
  q.zero_point = r.i32();
  try {
    q.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid quant params: ") + e.what());
  }
  return q;
}

}  // namespace

std::vector<std::uint8_t> encode_weight_file(const ModelGraph& g) {
  if (g.layers.size() > 0xFFFF) throw InvalidArgument("too many layers for the weight file");
  ByteWriter w;
  w.bytes(std::string_view(kMagic.data(), kMagic.size()));
  w.u16(kWeightFileVersion);
  w.u16(static_cast<std::uint16_t>(g.layers.size()));
  w.u8(static_cast<std::uint8_t>(g.input_shape.size()));
  for (auto d : g.input_shape) w.u32(static_cast<std::uint32_t>(d));
  write_quant(w, g.input_quant);

  for (std::size_t i = 0; i < g.layers.size(); ++i) {
    const auto& s = g.layers[i];
    w.u8(static_cast<std::uint8_t>(s.kind));
    w.u8(static_cast<std::uint8_t>(s.inputs.size()));
    for (int p : s.inputs) w.u32(p == kGraphInput ? kInputRef : static_cast<std::uint32_t>(p));
    w.u32(s.in_channels);
    w.u32(s.out_channels);
    w.u32(s.kernel);
    w.u32(s.stride);
    w.u32(s.padding);
    w.u32(s.hidden);
    w.u32(s.expansion);
    w.u32((s.use_bias ? kUseBias : 0u) | (s.return_sequences ? kReturnSequences : 0u));

    const auto& tensors = i < g.weights.layer_count() ? g.weights.layer(i)
                                                      : std::map<std::string, FloatTensor>{};
    w.u8(static_cast<std::uint8_t>(tensors.size()));
    for (const auto& [name, t] : tensors) {
      w.u8(tensor_id(name));
      w.u8(static_cast<std::uint8_t>(t.rank()));
      for (auto d : t.shape()) w.u32(static_cast<std::uint32_t>(d));
      for (float v : t.data()) w.f32(v);
    }
    write_quant(w, s.output_quant);
  }
  return w.take();
}

ModelGraph decode_weight_file(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const std::string magic = r.bytes(4);
  if (magic != std::string_view(kMagic.data(), kMagic.size())) {
    throw FormatError("bad magic: not a HERD weight file");
  }
  const std::uint16_t version = r.u16();
  if (version != kWeightFileVersion) {
    throw FormatError("unsupported weight file version " + std::to_string(version));
  }
  ModelGraph g;
  const std::uint16_t layer_count = r.u16();
  const std::uint8_t rank = r.u8();
  for (std::uint8_t d = 0; d < rank; ++d) g.input_shape.push_back(r.u32());
  g.input_quant = read_quant(r);

  for (std::uint16_t i = 0; i < layer_count; ++i) {
    LayerSpec s;
    const std::uint8_t tag = r.u8();
    const auto kind = layer_kind_from_tag(tag);
    if (!kind) throw FormatError("layer " + std::to_string(i) + ": unknown kind tag " + std::to_string(tag));
    s.kind = *kind;
    const std::uint8_t n_inputs = r.u8();
    for (std::uint8_t k = 0; k < n_inputs; ++k) {
      const std::uint32_t p = r.u32();
      s.inputs.push_back(p == kInputRef ? kGraphInput : static_cast<int>(p));
    }
    s.in_channels = r.u32();
    s.out_channels = r.u32();
    s.kernel = r.u32();
    s.stride = r.u32();
    s.padding = r.u32();
    s.hidden = r.u32();
    s.expansion = r.u32();
    const std::uint32_t flags = r.u32();
    s.use_bias = (flags & kUseBias) != 0;
    s.return_sequences = (flags & kReturnSequences) != 0;
    const int li = g.add(s);

    const std::uint8_t n_tensors = r.u8();
    for (std::uint8_t k = 0; k < n_tensors; ++k) {
      const std::uint8_t id = r.u8();
      if (id >= kTensorNames.size()) throw FormatError("unknown tensor id " + std::to_string(id));
      const std::uint8_t trank = r.u8();
      Shape shape;
      for (std::uint8_t d = 0; d < trank; ++d) shape.push_back(r.u32());
      const std::size_t n = num_elements(shape);
      if (n > r.remaining() / 4) throw FormatError("tensor payload exceeds file size");
      std::vector<float> data(n);
      for (auto& v : data) v = r.f32();
      g.weights.set(static_cast<std::size_t>(li), kTensorNames[id],
                    FloatTensor(std::move(shape), std::move(data)));
    }
    g.layers.back().output_quant = read_quant(r);
  }
  if (!r.done()) throw FormatError("trailing bytes after last layer");

  g = validate_graph(std::move(g));
  const bool all_quant = g.input_quant.has_value() &&
                         std::all_of(g.layers.begin(), g.layers.end(),
                                     [](const LayerSpec& s) { return s.output_quant.has_value(); });
  if (all_quant) g = quantize_weights(std::move(g));
  return g;
}

void save_weight_file(const ModelGraph& g, const std::filesystem::path& path) {
  const auto bytes = encode_weight_file(g);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path.string());
}

ModelGraph load_weight_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open weight file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_weight_file(bytes);
}

}  // namespace herd
