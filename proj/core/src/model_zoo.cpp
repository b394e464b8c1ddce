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

#include "herd/model_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herd/error.hpp"

namespace herd::zoo {
namespace {

std::uint32_t scaled(std::uint32_t channels, double width) {
  const auto v = static_cast<std::uint32_t>(std::lround(channels * width / 8.0)) * 8;
  return std::max<std::uint32_t>(8, v);
}

int add_from(ModelGraph& g, LayerSpec spec, int input) {
  spec.inputs = {input};
  return g.add(std::move(spec));
}

struct Stage {
  std::uint32_t expansion, channels, repeats, stride, kernel;
};

constexpr Stage kStages[] = {
    {1, 16, 1, 1, 3}, {6, 24, 2, 2, 3}, {6, 32, 3, 2, 5}, {6, 64, 4, 2, 5},
    {6, 96, 3, 1, 3}, {6, 160, 3, 2, 7}, {6, 320, 1, 1, 3},
};

int append_backbone(ModelGraph& g, const BackboneConfig& cfg, std::uint32_t& channels) {
  if (cfg.resolution % 32 != 0 || cfg.resolution == 0) {
    throw InvalidArgument("backbone resolution must be a positive multiple of 32");
  }
  if (!(cfg.width > 0.0)) throw InvalidArgument("backbone width must be positive");
  g.input_shape = {cfg.resolution, cfg.resolution, 3};
  channels = scaled(32, cfg.width);
  int last = add_from(g, layers::conv2d(3, channels, 3, 2, 1), kGraphInput);
  last = add_from(g, layers::relu6(), last);
  for (const Stage& st : kStages) {
    const std::uint32_t out = scaled(st.channels, cfg.width);
    for (std::uint32_t r = 0; r < st.repeats; ++r) {
      last = mb_block(g, last, channels, out, st.expansion, st.kernel, r == 0 ? st.stride : 1);
      channels = out;
    }
  }
  return last;
}

}  // namespace

int mb_block(ModelGraph& g, int input, std::uint32_t in_channels, std::uint32_t out_channels,
             std::uint32_t expansion, std::uint32_t kernel, std::uint32_t stride) {
  if (expansion == 0 || kernel % 2 == 0) {
    throw InvalidArgument("MB block needs expansion >= 1 and an odd kernel");
  }
  const std::uint32_t hidden = in_channels * expansion;
  int last = input;
  if (expansion > 1) {
    auto expand = layers::pointwise(in_channels, hidden);
    expand.expansion = expansion;
    last = add_from(g, expand, last);
    last = add_from(g, layers::relu6(), last);
  }
  last = add_from(g, layers::depthwise(hidden, kernel, stride, kernel / 2), last);
  last = add_from(g, layers::relu6(), last);
  last = add_from(g, layers::pointwise(hidden, out_channels), last);
  if (stride == 1 && in_channels == out_channels) {
    last = g.add(layers::residual_add(input, last));
  }
  return last;
}

ModelGraph mcunet_backbone(const BackboneConfig& cfg, std::uint64_t seed) {
  ModelGraph g;
  std::uint32_t channels = 0;
  append_backbone(g, cfg, channels);
  init_weights(g, seed);
  return validate_graph(std::move(g));
}

ModelGraph mcunet_classifier(std::uint32_t classes, const BackboneConfig& cfg,
                              std::uint64_t seed) {
  ModelGraph g;
  std::uint32_t channels = 0;
  int last = append_backbone(g, cfg, channels);
  last = add_from(g, layers::global_avg_pool(), last);
  last = add_from(g, layers::fully_connected(channels, classes), last);
  add_from(g, layers::softmax(), last);
  init_weights(g, seed);
  return validate_graph(std::move(g));
}

ModelGraph mcunet_yolo(const BackboneConfig& backbone, const YoloHeadConfig& head,
                       std::uint64_t seed) {
  if (backbone.resolution != 32 * head.grid) {
    throw InvalidArgument("resolution " + std::to_string(backbone.resolution) +
                          " does not give a " + std::to_string(head.grid) + "x" +
                          std::to_string(head.grid) + " grid");
  }
  ModelGraph g;
  std::uint32_t channels = 0;
  int last = append_backbone(g, backbone, channels);
  last = add_from(g, layers::conv2d(channels, head.head_channels, 3, 1, 1), last);
  last = add_from(g, layers::relu(), last);
  last = add_from(g, layers::conv2d(head.head_channels, head.head_channels / 2, 3, 1, 1), last);
  last = add_from(g, layers::relu(), last);
  last = add_from(g, layers::flatten(), last);
  const std::uint32_t cells = head.grid * head.grid;
  add_from(g, layers::fully_connected(cells * (head.head_channels / 2),
                                      cells * (5 * head.boxes + head.classes)),
           last);
  init_weights(g, seed);
  return validate_graph(std::move(g));
}

ModelGraph cnn_lstm(const CnnLstmConfig& cfg, std::uint64_t seed) {
  if (cfg.conv_channels.empty() || cfg.lstm_layers == 0) {
    throw InvalidArgument("CNN-LSTM needs at least one conv and one LSTM layer");
  }
  ModelGraph g;
  g.input_shape = {cfg.window, cfg.axes};
  std::uint32_t c = cfg.axes;
  for (std::uint32_t out : cfg.conv_channels) {
    g.add(layers::conv1d(c, out, cfg.conv_kernel, 1, cfg.conv_kernel / 2));
    g.add(layers::relu());
    if (cfg.pool > 1) g.add(layers::max_pool(cfg.pool, cfg.pool));
    c = out;
  }
  for (std::uint32_t l = 0; l < cfg.lstm_layers; ++l) {
    g.add(layers::lstm(c, cfg.hidden, l + 1 < cfg.lstm_layers));
    c = cfg.hidden;
  }
  g.add(layers::dropout());
  g.add(layers::fully_connected(c, cfg.classes));
  g.add(layers::softmax());
  init_weights(g, seed);
  return validate_graph(std::move(g));
}

CnnLstmConfig behavior_config() { return CnnLstmConfig{}; }

CnnLstmConfig behavior_config_unpruned() {
  CnnLstmConfig cfg;
  cfg.conv_channels = {32, 64, 96};
  cfg.hidden = 112;
  return cfg;
}

ModelGraph env_classifier(std::uint32_t resolution, std::uint32_t classes, std::uint64_t seed) {
  ModelGraph g;
  g.input_shape = {resolution, resolution, 3};
  g.add(layers::conv2d(3, 8, 3, 2, 1));
  g.add(layers::relu());
  g.add(layers::conv2d(8, 16, 3, 2, 1));
  g.add(layers::relu());
  g.add(layers::global_avg_pool());
  g.add(layers::fully_connected(16, classes));
  g.add(layers::softmax());
  init_weights(g, seed);
  return validate_graph(std::move(g));
}

}  // namespace herd::zoo
