// Copyright 2026 The gesteval Authors.
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

#include "gesteval/skeleton_io.h"

#include <istream>

#include <json.hpp>

#include "gesteval/errors.h"

namespace gesteval {
namespace {

using nlohmann::json;

Keypoint parse_point(const json& v, int lineno) {
  if (!v.is_array() || (v.size() != 3 && v.size() != 4)) {
    throw ParseError("keypoint must be [x, y, z] or [x, y, z, c]", lineno);
  }
  for (const auto& x : v) {
    if (!x.is_number()) throw ParseError("keypoint coordinates must be numbers", lineno);
  }
  Keypoint kp;
  kp.position = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  kp.confidence = v.size() == 4 ? v[3].get<double>() : 1.0;
  return kp;
}

std::vector<std::optional<Keypoint>> parse_flat(const json& v, std::size_t count,
                                                const char* what, int lineno) {
  if (!v.is_array() || v.size() != 4 * count) {
    throw ParseError(std::string(what) + " needs " + std::to_string(4 * count) + " numbers",
                     lineno);
  }
  std::vector<std::optional<Keypoint>> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (!v[4 * i + c].is_number()) {
        throw ParseError(std::string(what) + " must hold numbers", lineno);
      }
    }
    const double conf = v[4 * i + 3].get<double>();
    if (conf <= 0.0) continue;
    out[i] = Keypoint{{v[4 * i].get<double>(), v[4 * i + 1].get<double>(),
                       v[4 * i + 2].get<double>()},
                      conf};
  }
  return out;
}

json flat_points(const std::vector<std::optional<Keypoint>>& points) {
  json arr = json::array();
  for (const auto& kp : points) {
    if (kp) {
      arr.insert(arr.end(), {kp->position.x(), kp->position.y(), kp->position.z(),
                             kp->confidence});
    } else {
      arr.insert(arr.end(), {0.0, 0.0, 0.0, 0.0});
    }
  }
  return arr;
}

std::pair<double, double> number_pair(const json& v, const char* what, int lineno) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(std::string(what) + " must be [palm, back]", lineno);
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

SkeletonLayout parse_layout(const std::string& name) {
  if (name == "openni") return SkeletonLayout::kOpenNI15;
  if (name == "openpose") return SkeletonLayout::kOpenPose25;
  throw ParseError("unknown layout '" + name + "' (expected openni or openpose)");
}

std::string layout_name(SkeletonLayout layout) {
  return layout == SkeletonLayout::kOpenNI15 ? "openni" : "openpose";
}

SkeletonFrame parse_skeleton_record(const std::string& line, int lineno) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
  }
  if (!j.is_object()) throw ParseError("record must be a JSON object", lineno);
  if (!j.contains("layout") || !j["layout"].is_string()) {
    throw ParseError("record needs a 'layout' string", lineno);
  }
  SkeletonLayout layout;
  try {
    layout = parse_layout(j["layout"].get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(e.what(), lineno);
  }
  if (!j.contains("timestamp") || !j["timestamp"].is_number()) {
    throw ParseError("record needs a numeric 'timestamp'", lineno);
  }
  SkeletonFrame f = SkeletonFrame::empty(layout, j["timestamp"].get<double>());
  const std::size_t body_count = f.body.size();
  if (j.contains("body")) {
    if (!j["body"].is_object()) throw ParseError("'body' must be an object", lineno);
    for (const auto& [name, value] : j["body"].items()) {
      const auto idx = keypoint_index(layout, name);
      if (!idx) throw ParseError("unknown keypoint '" + name + "'", lineno);
      f.body[*idx] = parse_point(value, lineno);
    }
  } else if (j.contains("pose_keypoints_3d")) {
    f.body = parse_flat(j["pose_keypoints_3d"], body_count, "pose_keypoints_3d", lineno);
  } else {
    throw ParseError("record needs 'body' or 'pose_keypoints_3d'", lineno);
  }

  const bool openni = layout == SkeletonLayout::kOpenNI15;
  for (const char* key : {"hand_left_keypoints_3d", "hand_right_keypoints_3d"}) {
    if (!j.contains(key)) continue;
    if (openni) throw ParseError("OpenNI records cannot carry hand keypoints", lineno);
    auto hand = parse_flat(j[key], hand_kp::kCount, key, lineno);
    (std::string(key).find("left") != std::string::npos ? f.left_hand : f.right_hand) =
        std::move(hand);
  }
  if (j.contains("head_orientation")) {
    const auto& h = j["head_orientation"];
    if (!h.is_array() || h.size() != 3 || !h[0].is_number() || !h[1].is_number() ||
        !h[2].is_number()) {
      throw ParseError("'head_orientation' must be [alpha, beta, gamma]", lineno);
    }
    f.head_orientation = HeadOrientation{h[0].get<double>(), h[1].get<double>(),
                                         h[2].get<double>()};
  }
  if (j.contains("glove_left")) {
    const auto [palm, back] = number_pair(j["glove_left"], "glove_left", lineno);
    f.left_glove = GloveCounts{palm, back};
  }
  if (j.contains("glove_right")) {
    const auto [palm, back] = number_pair(j["glove_right"], "glove_right", lineno);
    f.right_glove = GloveCounts{palm, back};
  }
  try {
    f.validate();
  } catch (const StructuralError& e) {
    throw ParseError(e.what(), lineno);
  }
  return f;
}

std::string format_skeleton_record(const SkeletonFrame& frame) {
  json j;
  j["layout"] = layout_name(frame.layout);
  j["timestamp"] = frame.timestamp;
  json body = json::object();
  for (std::size_t i = 0; i < frame.body.size(); ++i) {
    if (!frame.body[i]) continue;
    const auto& kp = *frame.body[i];
    const std::string name(frame.layout == SkeletonLayout::kOpenNI15 ? kOpenNIKeypoints[i]
                                                                     : kOpenPoseKeypoints[i]);
    body[name] = {kp.position.x(), kp.position.y(), kp.position.z(), kp.confidence};
  }
  j["body"] = body;
  if (frame.left_hand) j["hand_left_keypoints_3d"] = flat_points(*frame.left_hand);
  if (frame.right_hand) j["hand_right_keypoints_3d"] = flat_points(*frame.right_hand);
  if (frame.head_orientation) {
    const auto& h = *frame.head_orientation;
    j["head_orientation"] = {h.alpha, h.beta, h.gamma};
  }
  if (frame.left_glove) j["glove_left"] = {frame.left_glove->palm, frame.left_glove->back};
  if (frame.right_glove) j["glove_right"] = {frame.right_glove->palm, frame.right_glove->back};
  return j.dump();
}

std::vector<SkeletonFrame> read_skeleton_records(std::istream& in) {
  std::vector<SkeletonFrame> frames;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    frames.push_back(parse_skeleton_record(line, lineno));
  }
  return frames;
}

}  // namespace gesteval
