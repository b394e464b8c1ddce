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

#include "herd/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "herd/error.hpp"

namespace herd {

std::string_view env_name(EnvLabel e) {
  switch (e) {
    case EnvLabel::kAnimal: return "Animal";
    case EnvLabel::kGrass: return "Grass";
    case EnvLabel::kFence: return "Fence";
  }
  return "?";
}

std::string_view fused_label_meaning(FusedLabel f) {
  switch (f) {
    case FusedLabel::kRestingSafe: return "resting in safe condition";
    case FusedLabel::kMovingSafe: return "moving in safe condition";
    case FusedLabel::kFeedingStanchionSafe: return "feeding in stanchion in safe condition";
    case FusedLabel::kGrazingSafe: return "grazing in safe condition";
    case FusedLabel::kRestingNearFence: return "resting near fence";
    case FusedLabel::kGrazingNearFence: return "grazing near fence";
    case FusedLabel::kAttacking: return "attacking animals";
    case FusedLabel::kPotentialEscape: return "potential escaping";
  }
  return "?";
}

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::kGreen: return "green";
    case Severity::kYellow: return "yellow";
    case Severity::kRed: return "red";
  }
  return "?";
}

FusedLabel fused_label_from_int(int value) {
  if (value < 0 || value >= static_cast<int>(kFusedClasses)) {
    throw InvalidArgument("fused label out of range: " + std::to_string(value));
  }
  return static_cast<FusedLabel>(value);
}

FusedLabel map_labels_table(EnvLabel e, BehaviorLabel b) {
  // Columns: RES, MOV, ATT, FES, GRZ.
  static constexpr std::uint8_t kTable[kEnvClasses][kBehaviorClasses] = {
      {0, 1, 6, 2, 3},  // Animal
      {0, 1, 6, 2, 3},  // Grass
      {4, 7, 7, 2, 5},  // Fence
  };
  const auto row = static_cast<std::size_t>(e);
  const auto col = static_cast<std::size_t>(b);
  if (row >= kEnvClasses || col >= kBehaviorClasses) throw InvalidArgument("label out of range");
  return static_cast<FusedLabel>(kTable[row][col]);
}

Severity severity_of(FusedLabel f) {
  const auto v = static_cast<std::uint8_t>(f);
  if (v <= 3) return Severity::kGreen;
  if (v <= 5) return Severity::kYellow;
  if (v <= 7) return Severity::kRed;
  throw InvalidArgument("fused label out of range: " + std::to_string(v));
}

namespace {

template <std::size_t N>
void check_distribution(const std::array<double, N>& p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + " probabilities must be finite and non-negative");
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-3) {
    throw InvalidArgument(std::string(what) + " probabilities sum to " + std::to_string(sum));
  }
}

template <std::size_t N>
std::size_t argmax(const std::array<double, N>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::array<double, kFusionInputs> concat(const EnvProbs& env, const BehaviorProbs& beh) {
  std::array<double, kFusionInputs> x{};
  std::copy(env.begin(), env.end(), x.begin());
  std::copy(beh.begin(), beh.end(), x.begin() + kEnvClasses);
  return x;
}

FusedScores scores_of(const FusionHead& h, const std::array<double, kFusionInputs>& x) {
  FusedScores s = h.bias;
  for (std::size_t k = 0; k < kFusedClasses; ++k) {
    for (std::size_t i = 0; i < kFusionInputs; ++i) s[k] += h.weight[k][i] * x[i];
  }
  return s;
}

FusedScores softmax(const FusedScores& s) {
  const double m = *std::max_element(s.begin(), s.end());
  FusedScores p{};
  double sum = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    p[k] = std::exp(s[k] - m);
    sum += p[k];
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

FusionOutput fuse_probabilities(const FusionHead& h, const EnvProbs& env, const BehaviorProbs& beh) {
  check_distribution(env, "environment");
  check_distribution(beh, "behavior");
  FusionOutput out;
  out.scores = scores_of(h, concat(env, beh));
  out.probabilities = softmax(out.scores);
  out.decision = static_cast<FusedLabel>(argmax(out.scores));
  return out;
}

EnvProbs classify_scene(const ModelGraph& g, const FloatTensor& image) {
  const FloatTensor y = forward_float(g, image);
  if (y.size() != kEnvClasses) {
    throw ShapeError("environment graph emits " + std::to_string(y.size()) + " values, expected " +
                     std::to_string(kEnvClasses));
  }
  EnvProbs p{};
  const bool has_softmax = g.layers.back().kind == LayerKind::kSoftmax;
  const double m = *std::max_element(y.data().begin(), y.data().end());
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = has_softmax ? y[i] : std::exp(y[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

FusedLabel label_by_table(const EnvProbs& env, const BehaviorProbs& beh) {
  return map_labels_table(static_cast<EnvLabel>(argmax(env)),
                          static_cast<BehaviorLabel>(argmax(beh)));
}

std::vector<FusionExample> table_dataset() {
  std::vector<FusionExample> out;
  for (std::size_t e = 0; e < kEnvClasses; ++e) {
    for (std::size_t b = 0; b < kBehaviorClasses; ++b) {
      FusionExample ex;
      ex.env[e] = 1.0;
      ex.behavior[b] = 1.0;
      ex.label = map_labels_table(static_cast<EnvLabel>(e), static_cast<BehaviorLabel>(b));
      out.push_back(ex);
    }
  }
  return out;
}

FitReport fit_fusion_head(std::span<const FusionExample> data, const FitOptions& options) {
  if (data.empty()) throw InvalidArgument("fusion training set is empty");
  if (options.epochs < 1) throw InvalidArgument("need at least one epoch");
  if (!(options.learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  std::vector<std::array<double, kFusionInputs>> xs;
  xs.reserve(data.size());
  for (const auto& ex : data) {
    if (static_cast<std::size_t>(ex.label) >= kFusedClasses) throw InvalidArgument("bad label");
    xs.push_back(concat(ex.env, ex.behavior));
  }

  FitReport report;
  FusionHead& h = report.head;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> init(0.0, options.init_scale);
  for (auto& row : h.weight) {
    for (auto& v : row) v = init(rng);
  }

  const double inv_n = 1.0 / static_cast<double>(data.size());
  auto count_correct = [&] {
    std::size_t ok = 0;
    for (std::size_t n = 0; n < data.size(); ++n) {
      if (argmax(scores_of(h, xs[n])) == static_cast<std::size_t>(data[n].label)) ++ok;
    }
    return ok;
  };

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    FusionHead grad;
    double loss = 0.0;
    for (std::size_t n = 0; n < data.size(); ++n) {
      const auto p = softmax(scores_of(h, xs[n]));
      const auto y = static_cast<std::size_t>(data[n].label);
      loss -= std::log(std::max(p[y], 1e-300));
      for (std::size_t k = 0; k < kFusedClasses; ++k) {
        const double d = (p[k] - (k == y ? 1.0 : 0.0)) * inv_n;
        grad.bias[k] += d;
        for (std::size_t i = 0; i < kFusionInputs; ++i) grad.weight[k][i] += d * xs[n][i];
      }
    }
    loss *= inv_n;
    if (!std::isfinite(loss)) {
      throw Error("fusion training diverged: non-finite loss at epoch " + std::to_string(epoch));
    }
    report.loss_history.push_back(loss);
    for (std::size_t k = 0; k < kFusedClasses; ++k) {
      h.bias[k] -= options.learning_rate * grad.bias[k];
      for (std::size_t i = 0; i < kFusionInputs; ++i) {
        h.weight[k][i] -= options.learning_rate * grad.weight[k][i];
      }
    }
    if (report.first_perfect_epoch < 0 && count_correct() == data.size()) {
      report.first_perfect_epoch = epoch;
    }
  }
  report.correct = count_correct();
  report.accuracy = static_cast<double>(report.correct) * inv_n;
  return report;
}

ModelGraph fusion_head_to_graph(const FusionHead& h) {
  ModelGraph g;
  g.input_shape = {kFusionInputs};
  g.add(layers::fully_connected(kFusionInputs, kFusedClasses));
  FloatTensor w({kFusedClasses, kFusionInputs});
  FloatTensor b({kFusedClasses});
  for (std::size_t k = 0; k < kFusedClasses; ++k) {
    b[k] = static_cast<float>(h.bias[k]);
    for (std::size_t i = 0; i < kFusionInputs; ++i) {
      w[k * kFusionInputs + i] = static_cast<float>(h.weight[k][i]);
    }
  }
  g.weights.set(0, "weight", std::move(w));
  g.weights.set(0, "bias", std::move(b));
  return validate_graph(std::move(g));
}

FusionHead fusion_head_from_graph(const ModelGraph& g) {
  if (g.layers.empty() || g.layers[0].kind != LayerKind::kFullyConnected ||
      g.layers[0].in_channels != kFusionInputs || g.layers[0].out_channels != kFusedClasses) {
    throw ShapeError("fusion head must start with an 8 -> 8 fully_connected layer");
  }
  const auto& w = g.weights.get(0, "weight");
  FusionHead h;
  for (std::size_t k = 0; k < kFusedClasses; ++k) {
    if (g.layers[0].use_bias) h.bias[k] = g.weights.get(0, "bias")[k];
    for (std::size_t i = 0; i < kFusionInputs; ++i) h.weight[k][i] = w[k * kFusionInputs + i];
  }
  return h;
}

}  // namespace herd
