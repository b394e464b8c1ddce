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
#include <vector>

#include "herd/graph.hpp"

namespace herd::zoo {

// Every builder returns a validated graph with weights drawn by init_weights
// from `seed`.

// Appends an inverted-residual (MB) block reading from `input`: 1x1
// expansion + relu6 (skipped when expansion == 1), kxk depthwise + relu6,
// 1x1 linear projection, and a residual add when stride == 1 and the channel
// count is unchanged. Returns the index of the block's last layer.
int mb_block(ModelGraph& g, int input, std::uint32_t in_channels, std::uint32_t out_channels,
             std::uint32_t expansion, std::uint32_t kernel, std::uint32_t stride);

struct BackboneConfig {
  std::uint32_t resolution = 176;
  double width = 0.5;
};

// MobileNetV2-style MB-block backbone scaled by width and resolution. The
// per-block layout is a stand-in; it is not a searched architecture.
// Output is the last feature map [R/32, R/32, C].
ModelGraph mcunet_backbone(const BackboneConfig& cfg = {}, std::uint64_t seed = 0);

// Backbone followed by global average pooling and a classifier.
ModelGraph mcunet_classifier(std::uint32_t classes, const BackboneConfig& cfg = {},
                              std::uint64_t seed = 0);

struct YoloHeadConfig {
  std::uint32_t grid = 7;
  std::uint32_t boxes = 2;
  std::uint32_t classes = 4;
  std::uint32_t head_channels = 64;
};

// Backbone + detection head of two 3x3 convolutions and one linear layer
// producing S*S*(5B+C) values. Resolution must be 32 * grid.
ModelGraph mcunet_yolo(const BackboneConfig& backbone = {224, 0.5}, const YoloHeadConfig& head = {},
                       std::uint64_t seed = 0);

struct CnnLstmConfig {
  std::uint32_t window = 250;
  std::uint32_t axes = 3;
  std::vector<std::uint32_t> conv_channels = {32, 64, 64};
  std::uint32_t conv_kernel = 5;
  std::uint32_t pool = 2;
  std::uint32_t lstm_layers = 4;
  std::uint32_t hidden = 70;
  std::uint32_t classes = 5;
};

// conv1d/relu/max_pool blocks, a stack of LSTM layers (all but the last
// return sequences), a linear classifier and softmax.
ModelGraph cnn_lstm(const CnnLstmConfig& cfg, std::uint64_t seed = 0);

// The selected 3-CNN / 4-LSTM behavior model (~0.188M parameters).
CnnLstmConfig behavior_config();
// The unpruned reference configuration (~0.438M parameters).
CnnLstmConfig behavior_config_unpruned();

// Small CNN used as the environment classifier of a collar device:
// [res, res, 3] image -> softmax over `classes`.
ModelGraph env_classifier(std::uint32_t resolution = 16, std::uint32_t classes = 3,
                          std::uint64_t seed = 0);

}  // namespace herd::zoo
