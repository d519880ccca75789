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

#include "gesteval/skeleton_mapping.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gesteval/errors.h"
#include "gesteval/key_value.h"

namespace gesteval {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTiny = 1e-12;

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Eigen::Matrix3d rot_y(double t) {
  return Eigen::AngleAxisd(t, Vec3::UnitY()).toRotationMatrix();
}
Eigen::Matrix3d rot_z(double t) {
  return Eigen::AngleAxisd(t, Vec3::UnitZ()).toRotationMatrix();
}

std::optional<Vec3> hand_point(const HandKeypoints& hand, int idx) {
  if (hand.size() != hand_kp::kCount) {
    throw StructuralError("hand needs 21 keypoints, got " + std::to_string(hand.size()));
  }
  if (!hand[idx]) return std::nullopt;
  return hand[idx]->position;
}

Vec3 require_hand_point(const HandKeypoints& hand, int idx) {
  auto p = hand_point(hand, idx);
  if (!p) throw MissingKeypointError("hand keypoint " + std::to_string(idx) + " missing");
  return *p;
}

HandKeypoints filter_hand(const HandKeypoints& hand, double min_confidence) {
  HandKeypoints out = hand;
  for (auto& kp : out) {
    if (kp && kp->confidence < min_confidence) kp.reset();
  }
  return out;
}

RangeMap read_range(const KeyValueDocument& doc, const std::string& name, RangeMap fallback) {
  if (doc.contains(name + ".source")) {
    const auto v = doc.numbers(name + ".source", 2);
    fallback.src_lo = v[0];
    fallback.src_hi = v[1];
  }
  if (doc.contains(name + ".target")) {
    const auto v = doc.numbers(name + ".target", 2);
    fallback.dst_lo = v[0];
    fallback.dst_hi = v[1];
  }
  return fallback;
}

// Keypoints used by the arm chain, by layout.
struct ArmKeypoints {
  std::optional<Vec3> neck, mid_hip;
  std::optional<Vec3> shoulder[2], elbow[2], wrist[2];
};

ArmKeypoints arm_keypoints(const SkeletonFrame& f, double c) {
  ArmKeypoints k;
  k.neck = f.find("Neck", c);
  auto midpoint = [](std::optional<Vec3> a, std::optional<Vec3> b) -> std::optional<Vec3> {
    if (a && b) return 0.5 * (*a + *b);
    return std::nullopt;
  };
  if (f.layout == SkeletonLayout::kOpenNI15) {
    k.mid_hip = midpoint(f.find("LeftHip", c), f.find("RightHip", c));
    k.shoulder[0] = f.find("LeftShoulder", c);
    k.elbow[0] = f.find("LeftElbow", c);
    k.wrist[0] = f.find("LeftHand", c);
    k.shoulder[1] = f.find("RightShoulder", c);
    k.elbow[1] = f.find("RightElbow", c);
    k.wrist[1] = f.find("RightHand", c);
  } else {
    k.mid_hip = f.find("MidHip", c);
    if (!k.mid_hip) k.mid_hip = midpoint(f.find("LHip", c), f.find("RHip", c));
    k.shoulder[0] = f.find("LShoulder", c);
    k.elbow[0] = f.find("LElbow", c);
    k.wrist[0] = f.find("LWrist", c);
    k.shoulder[1] = f.find("RShoulder", c);
    k.elbow[1] = f.find("RElbow", c);
    k.wrist[1] = f.find("RWrist", c);
  }
  return k;
}

std::optional<BodyFrame> try_body_frame(const ArmKeypoints& k) {
  if (!k.neck || !k.mid_hip || !k.shoulder[0] || !k.shoulder[1]) return std::nullopt;
  return body_frame(*k.neck, *k.mid_hip, *k.shoulder[0], *k.shoulder[1]);
}

// Unclamped 8 arm values, or nullopt when keypoints are missing.
std::optional<std::array<double, 8>> raw_arm_values(const ArmKeypoints& k,
                                                    const std::optional<BodyFrame>& frame) {
  if (!frame) return std::nullopt;
  for (int s = 0; s < 2; ++s) {
    if (!k.shoulder[s] || !k.elbow[s] || !k.wrist[s]) return std::nullopt;
  }
  std::array<double, 8> out{};
  for (int s = 0; s < 2; ++s) {
    const ArmAngles a = arm_angles(*k.shoulder[s], *k.elbow[s], *k.wrist[s], *frame,
                                   s == 0 ? Side::kLeft : Side::kRight);
    out[4 * s + 0] = a.shoulder_pitch;
    out[4 * s + 1] = a.shoulder_roll;
    out[4 * s + 2] = a.elbow_yaw;
    out[4 * s + 3] = a.elbow_roll;
  }
  return out;
}

constexpr Joint kArmJoints[8] = {Joint::kLShoulderPitch, Joint::kLShoulderRoll,
                                 Joint::kLElbowYaw,      Joint::kLElbowRoll,
                                 Joint::kRShoulderPitch, Joint::kRShoulderRoll,
                                 Joint::kRElbowYaw,      Joint::kRElbowRoll};

}  // namespace

SkeletonFrame SkeletonFrame::empty(SkeletonLayout layout, double timestamp) {
  SkeletonFrame f;
  f.layout = layout;
  f.timestamp = timestamp;
  f.body.assign(layout == SkeletonLayout::kOpenNI15 ? kOpenNIKeypoints.size()
                                                    : kOpenPoseKeypoints.size(),
                std::nullopt);
  return f;
}

void SkeletonFrame::validate() const {
  if (layout == SkeletonLayout::kOpenNI15) {
    if (body.size() != kOpenNIKeypoints.size()) {
      throw StructuralError("OpenNI frame needs 15 body keypoints, got " +
                            std::to_string(body.size()));
    }
    if (left_hand || right_hand) throw StructuralError("OpenNI frame cannot carry hands");
  } else {
    if (body.size() != kOpenPoseKeypoints.size()) {
      throw StructuralError("OpenPose frame needs 25 body keypoints, got " +
                            std::to_string(body.size()));
    }
    for (const auto* hand : {&left_hand, &right_hand}) {
      if (*hand && (*hand)->size() != hand_kp::kCount) {
        throw StructuralError("OpenPose hand needs 21 keypoints, got " +
                              std::to_string((*hand)->size()));
      }
    }
  }
}

std::optional<int> keypoint_index(SkeletonLayout layout, std::string_view name) {
  auto search = [name](const auto& names) -> std::optional<int> {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
  };
  return layout == SkeletonLayout::kOpenNI15 ? search(kOpenNIKeypoints)
                                             : search(kOpenPoseKeypoints);
}

std::optional<Vec3> SkeletonFrame::find(std::string_view name, double min_confidence) const {
  const auto idx = keypoint_index(layout, name);
  if (!idx || static_cast<std::size_t>(*idx) >= body.size()) return std::nullopt;
  const auto& kp = body[*idx];
  if (!kp || kp->confidence < min_confidence) return std::nullopt;
  return kp->position;
}

void SkeletonFrame::set(std::string_view name, const Vec3& position, double confidence) {
  const auto idx = keypoint_index(layout, name);
  if (!idx) throw StructuralError("unknown keypoint '" + std::string(name) + "'");
  if (body.size() <= static_cast<std::size_t>(*idx)) body.resize(*idx + 1);
  body[*idx] = Keypoint{position, confidence};
}

double range_conv(double x, const RangeMap& map) {
  const double t = std::clamp((x - map.src_lo) / (map.src_hi - map.src_lo), 0.0, 1.0);
  return map.dst_lo + t * (map.dst_hi - map.dst_lo);
}

MappingParams MappingParams::defaults(const RobotProfile& profile) {
  MappingParams p;
  p.max_wrist_yaw = profile.limit(Joint::kLWristYaw).hi;
  const Interval& pitch = profile.limit(Joint::kHeadPitch);
  const Interval& yaw = profile.limit(Joint::kHeadYaw);
  p.head_pitch = {0.10, 0.30, pitch.lo, pitch.hi};
  p.head_yaw = {-kPi / 2, kPi / 2, yaw.lo, yaw.hi};
  p.hand_yaw = {0.02, 0.16, -p.max_wrist_yaw, p.max_wrist_yaw};
  p.hand_open = {0.08, 0.20, 0.0, 1.0};
  return p;
}

MappingParams MappingParams::from_document(const KeyValueDocument& doc,
                                           const RobotProfile& profile) {
  static const char* kKnown[] = {
      "k1", "k2", "head_pitch_gain", "n_pixels", "max_wrist_yaw",
      "head_pitch.source", "head_pitch.target", "head_yaw.source", "head_yaw.target",
      "hand_yaw.source", "hand_yaw.target", "hand_open.source", "hand_open.target",
      "wrist_height_reference", "wrist_height_gain", "palm_elbow_yaw_offset",
      "min_confidence"};
  for (const auto& [key, value] : doc.entries()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown),
                     [&](const char* k) { return key == k; }) == std::end(kKnown)) {
      throw ParseError("unknown mapping key '" + key + "'", doc.line_of(key));
    }
  }
  MappingParams p = defaults(profile);
  p.k1 = doc.number_or("k1", p.k1);
  p.k2 = doc.number_or("k2", p.k2);
  p.head_pitch_gain = doc.number_or("head_pitch_gain", p.head_pitch_gain);
  p.n_pixels = doc.number_or("n_pixels", p.n_pixels);
  if (doc.contains("max_wrist_yaw")) {
    p.max_wrist_yaw = doc.number("max_wrist_yaw");
    p.hand_yaw.dst_lo = -p.max_wrist_yaw;
    p.hand_yaw.dst_hi = p.max_wrist_yaw;
  }
  p.head_pitch = read_range(doc, "head_pitch", p.head_pitch);
  p.head_yaw = read_range(doc, "head_yaw", p.head_yaw);
  p.hand_yaw = read_range(doc, "hand_yaw", p.hand_yaw);
  p.hand_open = read_range(doc, "hand_open", p.hand_open);
  p.wrist_height_reference = doc.number_or("wrist_height_reference", p.wrist_height_reference);
  p.wrist_height_gain = doc.number_or("wrist_height_gain", p.wrist_height_gain);
  p.palm_elbow_yaw_offset = doc.number_or("palm_elbow_yaw_offset", p.palm_elbow_yaw_offset);
  p.min_confidence = doc.number_or("min_confidence", p.min_confidence);
  p.validate();
  return p;
}

void MappingParams::validate() const {
  if (!(k1 > 0.0)) throw StructuralError("k1 must be positive");
  if (!(n_pixels > 0.0)) throw StructuralError("n_pixels must be positive");
  if (!(max_wrist_yaw > 0.0)) throw StructuralError("max_wrist_yaw must be positive");
  for (const RangeMap* m : {&head_pitch, &head_yaw, &hand_yaw, &hand_open}) {
    if (!(m->src_lo < m->src_hi)) throw StructuralError("range source needs lo < hi");
  }
}

HeadAngles map_head_openni(const HeadOrientation& orientation, const Vec3& neck,
                           const Vec3& head, const MappingParams& params,
                           const RobotProfile& profile) {
  const Vec3 hn = head - neck;
  if (!hn.allFinite() || hn.norm() < kTiny) {
    throw DegenerateGeometryError("head and neck keypoints coincide");
  }
  // (depth away from the camera, height) plane, rotated by -pi/2 so that an
  // upright head lies on the horizontal axis.
  const double depth = -hn.z();
  const double height = hn.y();
  const double c = std::cos(-kPi / 2);
  const double s = std::sin(-kPi / 2);
  const double rx = depth * c - height * s;
  const double ry = depth * s + height * c;
  const double pitch =
      params.head_pitch_gain * (std::atan2(ry, rx) + std::abs(params.k2 * orientation.gamma));
  // A rotation about the vertical axis leaves the angle about that axis unchanged.
  const double yaw = params.k1 * orientation.beta;
  return {profile.limit(Joint::kHeadYaw).clamp(yaw),
          profile.limit(Joint::kHeadPitch).clamp(pitch)};
}

HeadAngles map_head_openpose(const Vec3& nose, const Vec3& neck, const MappingParams& params) {
  const Vec3 nn = nose - neck;
  const double dist = nn.norm();
  if (!std::isfinite(dist) || dist < kTiny) {
    throw DegenerateGeometryError("nose and neck keypoints coincide");
  }
  const double x = std::clamp(nn.x() / dist, -1.0, 1.0);
  return {range_conv(-std::asin(x), params.head_yaw), range_conv(dist, params.head_pitch)};
}

HandSide map_hand_side_openpose(const HandKeypoints& hand, Side side) {
  const Vec3 thumb = require_hand_point(hand, hand_kp::kThumbTip);
  const Vec3 pinky = require_hand_point(hand, hand_kp::kPinkyTip);
  const Eigen::Vector2d op = (pinky - thumb).head<2>();
  if (op.norm() < kTiny) throw DegenerateGeometryError("thumb and pinky tips coincide");
  const double alpha = std::atan2(op.y(), op.x());
  const double c = std::cos(-alpha);
  const double s = std::sin(-alpha);
  int above = 0;
  int below = 0;
  for (int idx : {hand_kp::kIndexTip, hand_kp::kMiddleTip, hand_kp::kRingTip}) {
    const Eigen::Vector2d o = (require_hand_point(hand, idx) - thumb).head<2>();
    const double y = o.x() * s + o.y() * c;
    if (y > 0.0) ++above;
    if (y < 0.0) ++below;
  }
  if (side == Side::kRight) return above >= 2 ? HandSide::kBack : HandSide::kPalm;
  return below >= 2 ? HandSide::kBack : HandSide::kPalm;
}

double map_hand_yaw_openpose(const HandKeypoints& hand, double wrist_height,
                             const MappingParams& params) {
  const Vec3 thumb = require_hand_point(hand, hand_kp::kThumbTip);
  const Vec3 pinky = require_hand_point(hand, hand_kp::kPinkyTip);
  const double dist = (thumb - pinky).head<2>().norm();
  RangeMap map = params.hand_yaw;
  const double shift =
      params.wrist_height_gain * std::max(0.0, params.wrist_height_reference - wrist_height);
  map.src_lo += shift;
  map.src_hi += shift;
  return range_conv(dist, map);
}

double map_hand_opening_openpose(const HandKeypoints& hand, const MappingParams& params) {
  const Vec3 wrist = require_hand_point(hand, hand_kp::kWrist);
  const Vec3 middle = require_hand_point(hand, hand_kp::kMiddleTip);
  return std::clamp(range_conv((middle - wrist).norm(), params.hand_open), 0.0, 1.0);
}

double map_hand_yaw_openni(double palm_pixels, double back_pixels, const MappingParams& params) {
  if (!(palm_pixels >= 0.0) || !(back_pixels >= 0.0)) {
    throw StructuralError("glove pixel counts must be non-negative");
  }
  if (!(params.n_pixels > 0.0)) throw StructuralError("n_pixels must be positive");
  if (palm_pixels == 0.0 && back_pixels == 0.0) {
    throw UnknownOrientationError("no glove pixels detected");
  }
  const double n = params.n_pixels;
  const double max = std::max(palm_pixels, back_pixels);
  const double yaw = palm_pixels >= back_pixels ? max / n * params.max_wrist_yaw
                                                : (max - n) / n * params.max_wrist_yaw;
  return std::clamp(yaw, -params.max_wrist_yaw, params.max_wrist_yaw);
}

Vec3 BodyFrame::to_body(const Vec3& v) const {
  return {forward.dot(v), left.dot(v), up.dot(v)};
}

BodyFrame body_frame(const Vec3& neck, const Vec3& mid_hip, const Vec3& left_shoulder,
                     const Vec3& right_shoulder) {
  Vec3 up = neck - mid_hip;
  if (!up.allFinite() || up.norm() < kTiny) {
    throw DegenerateGeometryError("neck and mid-hip coincide");
  }
  up.normalize();
  Vec3 lateral = left_shoulder - right_shoulder;
  lateral -= lateral.dot(up) * up;
  if (!lateral.allFinite() || lateral.norm() < kTiny) {
    throw DegenerateGeometryError("shoulder line is degenerate");
  }
  lateral.normalize();
  return {lateral.cross(up), lateral, up};
}

ArmAngles arm_angles(const Vec3& shoulder, const Vec3& elbow, const Vec3& wrist,
                     const BodyFrame& frame, Side side) {
  Vec3 upper = frame.to_body(elbow - shoulder);
  Vec3 fore = frame.to_body(wrist - elbow);
  if (!upper.allFinite() || upper.norm() < kTiny) {
    throw DegenerateGeometryError("zero-length upper arm");
  }
  if (!fore.allFinite() || fore.norm() < kTiny) {
    throw DegenerateGeometryError("zero-length forearm");
  }
  upper.normalize();
  fore.normalize();

  ArmAngles a;
  a.shoulder_roll = kPi / 2 - angle_between(upper, Vec3::UnitY());
  const Vec3 sagittal(upper.x(), 0.0, upper.z());
  if (sagittal.norm() > kTiny) {
    // Positive pitch lowers the arm; the sign follows (x cross sagittal) . y.
    const double sign = Vec3::UnitX().cross(sagittal).dot(Vec3::UnitY()) >= 0.0 ? 1.0 : -1.0;
    a.shoulder_pitch = sign * angle_between(sagittal, Vec3::UnitX());
  }
  const Eigen::Matrix3d shoulder_rot = rot_y(a.shoulder_pitch) * rot_z(a.shoulder_roll);
  const Vec3 local = shoulder_rot.transpose() * fore;
  const double bend = angle_between(upper, fore);
  a.elbow_roll = side == Side::kLeft ? -bend : bend;
  const double sin_roll = std::sin(a.elbow_roll);
  if (std::abs(sin_roll) > 1e-9) {
    a.elbow_yaw = std::atan2(local.z() / sin_roll, local.y() / sin_roll);
  }
  return a;
}

std::array<double, 8> map_arms(const SkeletonFrame& frame, const RobotProfile& profile,
                               double min_confidence) {
  frame.validate();
  const ArmKeypoints k = arm_keypoints(frame, min_confidence);
  const auto raw = raw_arm_values(k, try_body_frame(k));
  if (!raw) throw MissingKeypointError("arm keypoints missing");
  std::array<double, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = profile.limit(kArmJoints[i]).clamp((*raw)[i]);
  return out;
}

Pose map_frame(const SkeletonFrame& frame, const MappingParams& params,
               const RobotProfile& profile, const Pose& previous, CounterRng& finger_rng) {
  frame.validate();
  const double c = params.min_confidence;
  Pose pose;
  pose.values = previous.values;
  pose.timestamp = frame.timestamp;

  const ArmKeypoints k = arm_keypoints(frame, c);
  const std::optional<BodyFrame> body = try_body_frame(k);
  const auto arms = raw_arm_values(k, body);
  if (arms) {
    for (int i = 0; i < 8; ++i) pose[kArmJoints[i]] = (*arms)[i];
  }

  constexpr Joint kWrist[2] = {Joint::kLWristYaw, Joint::kRWristYaw};
  constexpr Joint kHand[2] = {Joint::kLHandOpen, Joint::kRHandOpen};
  constexpr Joint kElbowYaw[2] = {Joint::kLElbowYaw, Joint::kRElbowYaw};
  bool palm_up[2] = {false, false};

  if (frame.layout == SkeletonLayout::kOpenNI15) {
    const auto neck = frame.find("Neck", c);
    const auto head = frame.find("Head", c);
    if (neck && head && frame.head_orientation) {
      const HeadAngles h = map_head_openni(*frame.head_orientation, *neck, *head, params, profile);
      pose[Joint::kHeadYaw] = h.yaw;
      pose[Joint::kHeadPitch] = h.pitch;
    }
    const std::optional<GloveCounts>* gloves[2] = {&frame.left_glove, &frame.right_glove};
    for (int s = 0; s < 2; ++s) {
      if (*gloves[s]) {
        const GloveCounts& g = **gloves[s];
        try {
          pose[kWrist[s]] = map_hand_yaw_openni(g.palm, g.back, params);
          palm_up[s] = g.palm >= g.back;
        } catch (const UnknownOrientationError&) {
          // keep the previous wrist yaw
        }
      }
      pose[kHand[s]] = finger_rng.uniform();
    }
  } else {
    const auto nose = frame.find("Nose", c);
    const auto neck = frame.find("Neck", c);
    if (nose && neck) {
      const HeadAngles h = map_head_openpose(*nose, *neck, params);
      pose[Joint::kHeadYaw] = h.yaw;
      pose[Joint::kHeadPitch] = h.pitch;
    }
    const std::optional<HandKeypoints>* hands[2] = {&frame.left_hand, &frame.right_hand};
    for (int s = 0; s < 2; ++s) {
      if (!*hands[s]) continue;
      const HandKeypoints hand = filter_hand(**hands[s], c);
      const Side side = s == 0 ? Side::kLeft : Side::kRight;
      const bool tips = hand[hand_kp::kThumbTip] && hand[hand_kp::kPinkyTip];
      if (tips && hand[hand_kp::kIndexTip] && hand[hand_kp::kMiddleTip] &&
          hand[hand_kp::kRingTip]) {
        palm_up[s] = map_hand_side_openpose(hand, side) == HandSide::kPalm;
      }
      if (tips) {
        double height = params.wrist_height_reference;
        if (body && k.wrist[s] && k.neck && k.mid_hip) {
          height = body->up.dot(*k.wrist[s] - 0.5 * (*k.neck + *k.mid_hip));
        }
        pose[kWrist[s]] = map_hand_yaw_openpose(hand, height, params);
      }
      if (hand[hand_kp::kWrist] && hand[hand_kp::kMiddleTip]) {
        pose[kHand[s]] = map_hand_opening_openpose(hand, params);
      }
    }
  }
  // Held arm values already carry the offset from the frame they came from.
  for (int s = 0; s < 2; ++s) {
    if (arms && palm_up[s]) pose[kElbowYaw[s]] += params.palm_elbow_yaw_offset;
  }
  return validate_pose(pose, profile);
}

MappingStream::MappingStream(MappingParams params, RobotProfile profile, std::uint64_t seed)
    : params_(std::move(params)), profile_(std::move(profile)), rng_(seed) {
  params_.validate();
  last_ = validate_pose(Pose{}, profile_);
  last_.clamped.reset();
}

Pose MappingStream::map(const SkeletonFrame& frame) {
  last_ = map_frame(frame, params_, profile_, last_, rng_);
  return last_;
}

}  // namespace gesteval
