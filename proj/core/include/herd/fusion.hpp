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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "herd/behavior.hpp"
#include "herd/graph.hpp"

namespace herd {

enum class EnvLabel : std::uint8_t { kAnimal = 0, kGrass = 1, kFence = 2 };

enum class FusedLabel : std::uint8_t {
  kRestingSafe = 0,
  kMovingSafe = 1,
  kFeedingStanchionSafe = 2,
  kGrazingSafe = 3,
  kRestingNearFence = 4,
  kGrazingNearFence = 5,
  kAttacking = 6,
  kPotentialEscape = 7,
};

enum class Severity : std::uint8_t { kGreen = 0, kYellow = 1, kRed = 2 };

inline constexpr std::size_t kEnvClasses = 3;
inline constexpr std::size_t kFusedClasses = 8;
inline constexpr std::size_t kFusionInputs = kEnvClasses + kBehaviorClasses;

using EnvProbs = std::array<double, kEnvClasses>;
using BehaviorProbs = std::array<double, kBehaviorClasses>;
using FusedScores = std::array<double, kFusedClasses>;

std::string_view env_name(EnvLabel e);
std::string_view fused_label_meaning(FusedLabel f);
std::string_view severity_name(Severity s);

// Throws InvalidArgument for values outside 0..7.
FusedLabel fused_label_from_int(int value);

// Scene x behavior -> fused activity. Animal and Grass rows are identical;
// the Fence row escalates resting/grazing to "near fence" and moving to
// "potential escape".
FusedLabel map_labels_table(EnvLabel e, BehaviorLabel b);

// 0-3 green, 4-5 yellow, 6-7 red.
Severity severity_of(FusedLabel f);

// Linear decision layer over the concatenated [env(3), behavior(5)]
// probabilities: scores = weight * x + bias, weight[out][in].
struct FusionHead {
  std::array<std::array<double, kFusionInputs>, kFusedClasses> weight{};
  FusedScores bias{};

  friend bool operator==(const FusionHead&, const FusionHead&) = default;
};

struct FusionOutput {
  FusedScores scores{};
  FusedScores probabilities{};  // softmax of scores
  FusedLabel decision = FusedLabel::kRestingSafe;
};

// Both inputs must be distributions: non-negative and summing to 1 within
// 1e-3. Ties in the argmax go to the lower label.
FusionOutput fuse_probabilities(const FusionHead& h, const EnvProbs& env, const BehaviorProbs& beh);

struct FusionExample {
  EnvProbs env{};
  BehaviorProbs behavior{};
  FusedLabel label = FusedLabel::kRestingSafe;
};

// Scene probabilities from an environment graph; a softmax is applied when
// the graph does not end with one.
EnvProbs classify_scene(const ModelGraph& g, const FloatTensor& image);

// Label a pair of modality outputs by applying the table to their argmaxes.
FusedLabel label_by_table(const EnvProbs& env, const BehaviorProbs& beh);
// All 15 one-hot (scene, behavior) combinations labeled by the table.
std::vector<FusionExample> table_dataset();

struct FitOptions {
  int epochs = 2000;
  double learning_rate = 0.5;
  std::uint64_t seed = 0;
  double init_scale = 0.01;
};

struct FitReport {
  FusionHead head;
  std::vector<double> loss_history;  // mean cross-entropy before each epoch's update
  std::size_t correct = 0;           // on the training set after the last epoch
  double accuracy = 0.0;
  int first_perfect_epoch = -1;      // first epoch after which every example is right
};

// Full-batch gradient descent on mean softmax cross-entropy, weights
// initialized from `seed`. Deterministic for a fixed seed.
FitReport fit_fusion_head(std::span<const FusionExample> data, const FitOptions& options = {});

// The head as an 8 -> 8 fully_connected weight-file graph and back.
ModelGraph fusion_head_to_graph(const FusionHead& h);
FusionHead fusion_head_from_graph(const ModelGraph& g);

}  // namespace herd
