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

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "herd/error.hpp"
#include "herd/sim/simulator.hpp"
#include "herd/weight_file.hpp"

namespace herd::sim {
namespace {

using nlohmann::json;

// A JSON node together with its dotted path, so every diagnostic names the
// field it is about.
struct Node {
  const json& v;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("scenario: " + path + ": " + what);
  }
  bool has(const char* key) const { return v.is_object() && v.contains(key); }
  Node at(const char* key) const {
    if (!v.is_object()) fail("expected an object");
    if (!v.contains(key)) fail(std::string("missing field '") + key + "'");
    return {v.at(key), path + "." + key};
  }
  Node at(std::size_t i) const { return {v.at(i), path + "[" + std::to_string(i) + "]"}; }
  std::size_t size() const {
    if (!v.is_array()) fail("expected an array");
    return v.size();
  }
  double number() const {
    if (!v.is_number()) fail("expected a number");
    return v.get<double>();
  }
  std::uint64_t uint(std::uint64_t max) const {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail("expected a non-negative integer");
    const auto u = v.get<std::uint64_t>();
    if (u > max) fail("value " + std::to_string(u) + " exceeds " + std::to_string(max));
    return u;
  }
  std::string str() const {
    if (!v.is_string()) fail("expected a string");
    return v.get<std::string>();
  }
  template <std::size_t N>
  std::array<double, N> reals() const {
    if (size() != N) fail("expected " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = at(i).number();
    return out;
  }
};

std::uint32_t u32_or(const Node& n, const char* key, std::uint32_t fallback) {
  return n.has(key) ? static_cast<std::uint32_t>(n.at(key).uint(0xFFFFFFFFu)) : fallback;
}
double real_or(const Node& n, const char* key, double fallback) {
  return n.has(key) ? n.at(key).number() : fallback;
}

Position position_of(const Node& dev) {
  if (!dev.has("position")) return {};
  const auto p = dev.at("position").reals<2>();
  return {p[0], p[1]};
}

BoundingBox box_of(const Node& n) {
  const auto b = n.reals<4>();
  BoundingBox box{b[0], b[1], b[2], b[3]};
  try {
    box.validate();
  } catch (const InvalidArgument& e) {
    n.fail(e.what());
  }
  return box;
}

// N animals laid out on a non-overlapping 8 x 8 grid of 0.1-wide boxes.
std::vector<Detection> synthetic_animals(std::size_t n) {
  std::vector<Detection> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 0.0125 + 0.125 * static_cast<double>(i % 8);
    const double y = 0.0125 + 0.125 * static_cast<double>(i / 8);
    out.push_back({{x, y, x + 0.1, y + 0.1}, 0, 0.9});
  }
  return out;
}

FrameInput frame_of(const Node& f) {
  if (f.has("animals")) return synthetic_animals(f.at("animals").uint(64));
  if (f.has("detections")) {
    const Node list = f.at("detections");
    std::vector<Detection> dets;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Node d = list.at(i);
      Detection det;
      det.class_id = static_cast<int>(d.at("class").uint(255));
      det.score = d.at("score").number();
      if (det.score < 0.0 || det.score > 1.0) d.at("score").fail("score must be in [0, 1]");
      det.box = box_of(d.at("box"));
      dets.push_back(det);
    }
    return dets;
  }
  if (f.has("yolo")) {
    const Node y = f.at("yolo");
    const auto grid = static_cast<std::uint32_t>(y.at("grid").uint(64));
    const auto boxes = static_cast<std::uint32_t>(y.at("boxes").uint(16));
    const auto classes = static_cast<std::uint32_t>(y.at("classes").uint(255));
    if (grid == 0 || boxes == 0 || classes == 0) y.fail("grid, boxes and classes must be positive");
    auto t = YoloTensor::zeros(grid, boxes, classes);
    if (y.has("cells")) {
      const Node cells = y.at("cells");
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const Node c = cells.at(i);
        const auto row = static_cast<std::uint32_t>(c.at("row").uint(grid - 1));
        const auto col = static_cast<std::uint32_t>(c.at("col").uint(grid - 1));
        const Node bl = c.at("boxes");
        if (bl.size() > boxes) bl.fail("more boxes than the grid holds");
        for (std::size_t b = 0; b < bl.size(); ++b) {
          const auto v = bl.at(b).reals<5>();
          std::copy(v.begin(), v.end(), t.box(row, col, static_cast<std::uint32_t>(b)));
        }
        const Node probs = c.at("probs");
        if (probs.size() != classes) probs.fail("expected one probability per class");
        for (std::size_t k = 0; k < classes; ++k) t.class_probs(row, col)[k] = static_cast<float>(probs.at(k).number());
      }
    }
    return t;
  }
  f.fail("frame needs one of 'animals', 'detections' or 'yolo'");
}

template <class Enum, std::size_t N>
std::array<double, N> one_hot(Enum e) {
  std::array<double, N> p{};
  p[static_cast<std::size_t>(e)] = 1.0;
  return p;
}

EnvLabel scene_of(const Node& n) {
  const auto s = n.str();
  for (auto e : {EnvLabel::kAnimal, EnvLabel::kGrass, EnvLabel::kFence}) {
    if (s == env_name(e)) return e;
  }
  n.fail("unknown scene '" + s + "' (Animal, Grass or Fence)");
}

CollarInput collar_input_of(const Node& n) {
  CollarInput in;
  if (n.v.is_number()) {
    in.label = static_cast<FusedLabel>(n.uint(7));
    return in;
  }
  if (n.has("label")) {
    in.label = static_cast<FusedLabel>(n.at("label").uint(7));
    return in;
  }
  if (n.has("scene")) {
    in.env = one_hot<EnvLabel, kEnvClasses>(scene_of(n.at("scene")));
  } else {
    in.env = n.at("env_probs").reals<kEnvClasses>();
  }
  if (n.has("behavior")) {
    const Node b = n.at("behavior");
    const auto label = parse_behavior(b.str());
    if (!label) b.fail("unknown behavior '" + b.str() + "' (RES, MOV, ATT, FES or GRZ)");
    in.behavior = *label;
  } else {
    in.behavior_probs = n.at("behavior_probs").reals<kBehaviorClasses>();
  }
  return in;
}

ModelGraph load_model(const Node& n, const std::filesystem::path& base) {
  const std::filesystem::path p = base / n.str();
  try {
    return load_weight_file(p);
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

Type2Pipeline pipeline_of(const Node& n, const std::filesystem::path& base) {
  Type2Pipeline p;
  if (n.has("behavior_weights")) p.behavior = load_model(n.at("behavior_weights"), base);
  if (n.has("env_weights")) p.env = load_model(n.at("env_weights"), base);
  if (n.has("fusion_weights")) {
    const Node f = n.at("fusion_weights");
    try {
      p.head = fusion_head_from_graph(load_model(f, base));
    } catch (const Error& e) {
      f.fail(e.what());
    }
    return p;
  }
  FitOptions opt;
  if (n.has("fusion")) {
    const Node f = n.at("fusion");
    opt.seed = f.has("seed") ? f.at("seed").uint(UINT64_MAX) : 0;
    opt.epochs = static_cast<int>(u32_or(f, "epochs", static_cast<std::uint32_t>(opt.epochs)));
    opt.learning_rate = real_or(f, "learning_rate", opt.learning_rate);
  }
  const auto data = table_dataset();
  try {
    p.head = fit_fusion_head(data, opt).head;
  } catch (const Error& e) {
    n.fail(e.what());
  }
  return p;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("scenario: not valid JSON: ") + e.what());
  }
  const Node root{doc, "$"};
  if (!doc.is_object()) root.fail("expected an object");

  Scenario s;
  s.horizon_ms = u32_or(root, "horizon_ms", 0);
  s.seed = root.has("seed") ? root.at("seed").uint(UINT64_MAX) : 0;
  s.ipc_latency_ms = u32_or(root, "ipc_latency_ms", s.ipc_latency_ms);
  s.activity_timeout_ms = u32_or(root, "activity_timeout_ms", 0);
  if (root.has("radio")) {
    const Node r = root.at("radio");
    s.range_m = real_or(r, "range_m", s.range_m);
    s.drop_probability = real_or(r, "drop_probability", 0.0);
    s.radio_latency_ms = u32_or(r, "latency_ms", s.radio_latency_ms);
    if (s.range_m < 0.0) r.at("range_m").fail("must be >= 0");
    if (s.drop_probability < 0.0 || s.drop_probability > 1.0) r.at("drop_probability").fail("must be in [0, 1]");
  }

  if (root.has("devices")) {
    const Node devices = root.at("devices");
    for (std::size_t i = 0; i < devices.size(); ++i) {
      const Node d = devices.at(i);
      const std::string type = d.at("type").str();
      const auto id = static_cast<std::uint16_t>(d.at("id").uint(0xFFFF));
      if (type == "gateway") {
        GatewaySpec g;
        g.id = id;
        g.position = position_of(d);
        g.frame_period_ms = u32_or(d, "frame_period_ms", g.frame_period_ms);
        if (g.frame_period_ms == 0) d.at("frame_period_ms").fail("must be positive");
        g.start_ms = u32_or(d, "start_ms", 0);
        g.inference_ms = u32_or(d, "inference_ms", 0);
        g.settings.score_threshold = real_or(d, "score_threshold", g.settings.score_threshold);
        g.settings.nms_iou = real_or(d, "nms_iou", g.settings.nms_iou);
        const Node frames = d.at("frames");
        if (frames.size() == 0) frames.fail("needs at least one frame");
        for (std::size_t k = 0; k < frames.size(); ++k) g.frames.push_back(frame_of(frames.at(k)));
        s.gateways.push_back(std::move(g));
      } else if (type == "collar") {
        CollarSpec c;
        c.id = id;
        c.position = position_of(d);
        c.step_period_ms = u32_or(d, "step_period_ms", c.step_period_ms);
        if (c.step_period_ms == 0) d.at("step_period_ms").fail("must be positive");
        c.start_ms = u32_or(d, "start_ms", 0);
        c.log_interval_ms = u32_or(d, "log_interval_ms", c.log_interval_ms);
        if (c.log_interval_ms == 0) d.at("log_interval_ms").fail("must be positive");
        if (d.has("pipeline")) c.pipeline = pipeline_of(d.at("pipeline"), base_dir);
        const Node inputs = d.at("inputs");
        if (inputs.size() == 0) inputs.fail("needs at least one input");
        for (std::size_t k = 0; k < inputs.size(); ++k) c.inputs.push_back(collar_input_of(inputs.at(k)));
        s.collars.push_back(std::move(c));
      } else {
        d.at("type").fail("unknown device type '" + type + "' (gateway or collar)");
      }
    }
  }
  try {
    validate_scenario(s);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("scenario: ") + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

}  // namespace herd::sim
