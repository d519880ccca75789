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

#ifndef GESTEVAL_CORE_MODEL_H_
#define GESTEVAL_CORE_MODEL_H_

#include <array>
#include <bitset>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gesteval {

class KeyValueDocument;

inline constexpr int kJointCount = 14;

// Column order of every pose, unit of movement and dataset in the library.
enum class Joint : int {
  kHeadYaw = 0,
  kHeadPitch,
  kLShoulderPitch,
  kLShoulderRoll,
  kLElbowYaw,
  kLElbowRoll,
  kLWristYaw,
  kLHandOpen,
  kRShoulderPitch,
  kRShoulderRoll,
  kRElbowYaw,
  kRElbowRoll,
  kRWristYaw,
  kRHandOpen,
};

inline constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "HeadYaw",        "HeadPitch",     "LShoulderPitch", "LShoulderRoll",
    "LElbowYaw",      "LElbowRoll",    "LWristYaw",      "LHandOpen",
    "RShoulderPitch", "RShoulderRoll", "RElbowYaw",      "RElbowRoll",
    "RWristYaw",      "RHandOpen"};

constexpr int index(Joint j) { return static_cast<int>(j); }
std::string_view joint_name(Joint j);
std::optional<Joint> joint_from_name(std::string_view name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double midpoint() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

struct LinkLengths {
  double upper_arm = 0.0;        // shoulder to elbow, meters
  double forearm = 0.0;          // elbow to wrist, meters
  double shoulder_offset = 0.0;  // torso center line to each shoulder, meters
};

// Joint limits and link geometry of the target robot. Immutable once built.
class RobotProfile {
 public:
  RobotProfile(const std::array<Interval, kJointCount>& limits, LinkLengths links);

  // Pepper-like limits (radians, hand opening in [0, 1]).
  static RobotProfile pepper();
  static RobotProfile from_document(const KeyValueDocument& doc);
  static RobotProfile load(const std::filesystem::path& path);

  const Interval& limit(Joint j) const { return limits_[index(j)]; }
  const Interval& limit(int j) const { return limits_.at(j); }
  const std::array<Interval, kJointCount>& limits() const { return limits_; }
  const LinkLengths& links() const { return links_; }

  // Serialized in the same key = value form read by from_document().
  std::string to_document() const;

 private:
  std::array<Interval, kJointCount> limits_;
  LinkLengths links_;
};

// One frame of joint values in kJointNames order.
struct Pose {
  std::array<double, kJointCount> values{};
  std::optional<double> timestamp;
  // Joints whose value has been clamped into the profile limits.
  std::bitset<kJointCount> clamped;

  // Throws StructuralError unless `values` has exactly 14 entries.
  static Pose from_values(std::span<const double> values,
                          std::optional<double> timestamp = std::nullopt);

  double operator[](Joint j) const { return values[index(j)]; }
  double& operator[](Joint j) { return values[index(j)]; }
  int clamp_count() const { return static_cast<int>(clamped.count()); }
};

Pose validate_pose(const Pose& pose, const RobotProfile& profile);

// mu consecutive poses flattened as J_1(t)..J_14(t), J_1(t+dt)..J_14(t+dt), ...
class UnitOfMovement {
 public:
  UnitOfMovement(int mu, std::vector<double> flat, double dt);

  int mu() const { return mu_; }
  double dt() const { return dt_; }
  int dimension() const { return static_cast<int>(flat_.size()); }
  const std::vector<double>& flat() const { return flat_; }
  std::span<const double> pose_values(int k) const;

 private:
  int mu_;
  std::vector<double> flat_;
  double dt_;
};

UnitOfMovement flatten_window(std::span<const Pose> poses, double dt);
// Inverse of flatten_window. Timestamps are k * dt relative to the unit start.
std::vector<Pose> unflatten(const UnitOfMovement& um);

// Homogeneous collection of units (same mu and dt), N >= 1.
class GestureDataset {
 public:
  GestureDataset(std::vector<UnitOfMovement> units, std::string source_tag,
                 double sample_rate_hz);

  // Each row of `data` is one flattened unit of width 14 * mu.
  static GestureDataset from_matrix(const Eigen::MatrixXd& data, int mu,
                                    double sample_rate_hz, std::string source_tag);

  int size() const { return static_cast<int>(units_.size()); }
  int mu() const { return units_.front().mu(); }
  double dt() const { return units_.front().dt(); }
  int dimension() const { return kJointCount * mu(); }
  double sample_rate_hz() const { return sample_rate_hz_; }
  const std::string& source_tag() const { return source_tag_; }
  const std::vector<UnitOfMovement>& units() const { return units_; }
  const UnitOfMovement& unit(int i) const { return units_.at(i); }

 private:
  std::vector<UnitOfMovement> units_;
  std::string source_tag_;
  double sample_rate_hz_;
};

// Row i is unit i; column 14 * k + j is joint j at offset k * dt.
Eigen::MatrixXd as_matrix(const GestureDataset& ds);

// "HeadYaw@t+0" style labels for the 14 * mu columns of as_matrix().
std::vector<std::string> column_labels(int mu);

}  // namespace gesteval

#endif  // GESTEVAL_CORE_MODEL_H_
