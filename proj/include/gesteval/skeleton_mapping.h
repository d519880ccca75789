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

#ifndef GESTEVAL_SKELETON_MAPPING_H_
#define GESTEVAL_SKELETON_MAPPING_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gesteval/core_model.h"
#include "gesteval/rng.h"

namespace gesteval {

class KeyValueDocument;

// Input coordinates for both layouts: meters, right-handed camera frame with
// x to the camera's right, y up and z pointing from the scene toward the
// camera.
using Vec3 = Eigen::Vector3d;

enum class SkeletonLayout { kOpenNI15, kOpenPose25 };

inline constexpr std::array<std::string_view, 15> kOpenNIKeypoints = {
    "Head",      "Neck",     "Torso",         "LeftShoulder", "LeftElbow",
    "LeftHand",  "RightShoulder", "RightElbow", "RightHand",   "LeftHip",
    "LeftKnee",  "LeftFoot", "RightHip",      "RightKnee",    "RightFoot"};

inline constexpr std::array<std::string_view, 25> kOpenPoseKeypoints = {
    "Nose",    "Neck",      "RShoulder", "RElbow",    "RWrist", "LShoulder", "LElbow",
    "LWrist",  "MidHip",    "RHip",      "RKnee",     "RAnkle", "LHip",      "LKnee",
    "LAnkle",  "REye",      "LEye",      "REar",      "LEar",   "LBigToe",   "LSmallToe",
    "LHeel",   "RBigToe",   "RSmallToe", "RHeel"};

// OpenPose hand model indices.
namespace hand_kp {
inline constexpr int kWrist = 0;
inline constexpr int kThumbTip = 4;
inline constexpr int kIndexTip = 8;
inline constexpr int kMiddleTip = 12;
inline constexpr int kRingTip = 16;
inline constexpr int kPinkyTip = 20;
inline constexpr int kCount = 21;
}  // namespace hand_kp

struct Keypoint {
  Vec3 position = Vec3::Zero();
  double confidence = 1.0;
};

using HandKeypoints = std::vector<std::optional<Keypoint>>;

// Tracker-supplied head orientation (Euler angles, radians). beta is the
// rotation about the vertical axis, gamma the sideways tilt.
struct HeadOrientation {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// Pixel counts of the palm-colored and back-colored glove regions.
struct GloveCounts {
  double palm = 0.0;
  double back = 0.0;
};

struct SkeletonFrame {
  SkeletonLayout layout = SkeletonLayout::kOpenPose25;
  double timestamp = 0.0;
  // Layout order (kOpenNIKeypoints or kOpenPoseKeypoints); nullopt = not detected.
  std::vector<std::optional<Keypoint>> body;
  std::optional<HandKeypoints> left_hand;   // OpenPose only, 21 entries
  std::optional<HandKeypoints> right_hand;  // OpenPose only, 21 entries
  std::optional<HeadOrientation> head_orientation;  // OpenNI only
  std::optional<GloveCounts> left_glove;            // OpenNI only
  std::optional<GloveCounts> right_glove;           // OpenNI only

  static SkeletonFrame empty(SkeletonLayout layout, double timestamp = 0.0);

  // Throws StructuralError on keypoint counts that do not match the layout.
  void validate() const;

  // Body keypoint by name if present with confidence >= min_confidence.
  std::optional<Vec3> find(std::string_view name, double min_confidence = 0.0) const;
  void set(std::string_view name, const Vec3& position, double confidence = 1.0);
};

std::optional<int> keypoint_index(SkeletonLayout layout, std::string_view name);

// Clamped affine map from [src_lo, src_hi] onto dst_lo..dst_hi. The target
// may be reversed (dst_lo > dst_hi).
struct RangeMap {
  double src_lo = 0.0;
  double src_hi = 1.0;
  double dst_lo = 0.0;
  double dst_hi = 1.0;
};

double range_conv(double x, const RangeMap& map);

struct MappingParams {
  double k1 = 1.0;               // head yaw gain
  double k2 = 0.0;               // head tilt to pitch correction gain
  double head_pitch_gain = 1.0;  // gain on the final OpenNI head pitch
  double n_pixels = 2000.0;      // glove normalizing constant N
  double max_wrist_yaw = 1.8239;
  RangeMap head_pitch;  // nose-neck distance (m) -> head pitch (rad)
  RangeMap head_yaw;    // -asin(normalized nose-neck x) (rad) -> head yaw (rad)
  RangeMap hand_yaw;    // thumb-pinky distance (m) -> wrist yaw (rad)
  RangeMap hand_open;   // wrist-middle fingertip distance (m) -> [0, 1]
  // Below `wrist_height_reference` (m, relative to the torso center) the
  // hand_yaw source interval shifts up by wrist_height_gain * depth.
  double wrist_height_reference = 0.0;
  double wrist_height_gain = 0.5;
  // Added to the elbow yaw of a side whose palm faces the camera.
  double palm_elbow_yaw_offset = 0.0;
  double min_confidence = 0.1;

  static MappingParams defaults(const RobotProfile& profile);
  // Keys absent from `doc` keep their default value.
  static MappingParams from_document(const KeyValueDocument& doc,
                                     const RobotProfile& profile);
  void validate() const;
};

enum class Side { kLeft, kRight };
enum class HandSide { kPalm, kBack };

// Head yaw/pitch in radians.
struct HeadAngles {
  double yaw = 0.0;
  double pitch = 0.0;
};

HeadAngles map_head_openni(const HeadOrientation& orientation, const Vec3& neck,
                           const Vec3& head, const MappingParams& params,
                           const RobotProfile& profile);

HeadAngles map_head_openpose(const Vec3& nose, const Vec3& neck, const MappingParams& params);

// Palm/back from the fingertip layout in the image plane (x, y).
HandSide map_hand_side_openpose(const HandKeypoints& hand, Side side);

// Wrist yaw from the thumb-pinky fingertip distance in the image plane.
// `wrist_height` is relative to the torso center along the body's up axis.
double map_hand_yaw_openpose(const HandKeypoints& hand, double wrist_height,
                             const MappingParams& params);

// Finger opening in [0, 1] from the wrist to middle fingertip distance.
double map_hand_opening_openpose(const HandKeypoints& hand, const MappingParams& params);

// Glove-based wrist yaw. Equal counts count as palm dominant.
double map_hand_yaw_openni(double palm_pixels, double back_pixels,
                           const MappingParams& params);

// Orthonormal torso axes in camera coordinates. up points from mid-hip to
// neck, left from the right shoulder to the left shoulder (made orthogonal
// to up), forward = left x up.
struct BodyFrame {
  Vec3 forward;
  Vec3 left;
  Vec3 up;
  Vec3 to_body(const Vec3& camera_vector) const;
};

BodyFrame body_frame(const Vec3& neck, const Vec3& mid_hip, const Vec3& left_shoulder,
                     const Vec3& right_shoulder);

struct ArmAngles {
  double shoulder_pitch = 0.0;
  double shoulder_roll = 0.0;
  double elbow_yaw = 0.0;
  double elbow_roll = 0.0;
};

// Unclamped arm joint angles using the same chain as forward_kinematics():
// upper arm direction = Ry(pitch) Rz(roll) x, forearm direction =
// Ry(pitch) Rz(roll) Rx(elbow_yaw) Rz(elbow_roll) x in body axes
// (x forward, y left, z up). Elbow roll is <= 0 on the left arm and >= 0 on
// the right arm. Degenerate pitch (arm along the lateral axis) and degenerate
// elbow yaw (straight arm) resolve to 0.
ArmAngles arm_angles(const Vec3& shoulder, const Vec3& elbow, const Vec3& wrist,
                     const BodyFrame& frame, Side side);

// LShoulderPitch, LShoulderRoll, LElbowYaw, LElbowRoll, then the right arm,
// clamped into the profile limits.
std::array<double, 8> map_arms(const SkeletonFrame& frame, const RobotProfile& profile,
                               double min_confidence = 0.1);

// Maps one frame. Parts whose keypoints are missing keep their value from
// `previous`; OpenNI finger openings are drawn from `finger_rng`.
Pose map_frame(const SkeletonFrame& frame, const MappingParams& params,
               const RobotProfile& profile, const Pose& previous, CounterRng& finger_rng);

// Per-stream state for sequential mapping (hold-last-value, finger RNG).
class MappingStream {
 public:
  MappingStream(MappingParams params, RobotProfile profile, std::uint64_t seed);

  Pose map(const SkeletonFrame& frame);
  const Pose& last() const { return last_; }

 private:
  MappingParams params_;
  RobotProfile profile_;
  CounterRng rng_;
  Pose last_;
};

}  // namespace gesteval

#endif  // GESTEVAL_SKELETON_MAPPING_H_
