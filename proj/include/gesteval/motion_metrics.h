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

#ifndef GESTEVAL_MOTION_METRICS_H_
#define GESTEVAL_MOTION_METRICS_H_

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gesteval/core_model.h"

namespace gesteval {

enum class Site { kLhand = 0, kRhand, kLelbow, kRelbow };
inline constexpr int kSiteCount = 4;
inline constexpr std::array<std::string_view, kSiteCount> kSiteNames = {"Lhand", "Rhand",
                                                                        "Lelbow", "Relbow"};

struct SitePositions {
  Eigen::Vector3d left_elbow, right_elbow, left_hand, right_hand;
  Eigen::Vector3d left_shoulder, right_shoulder;

  const Eigen::Vector3d& site(Site s) const;
};

// Torso frame: x forward, y left, z up, origin between the shoulders.
// Shoulders sit at (0, +-shoulder_offset, 0). For each arm
//   elbow = shoulder + upper_arm * Ry(pitch) Rz(roll) x
//   hand  = elbow + forearm * Ry(pitch) Rz(roll) Rx(elbow_yaw) Rz(elbow_roll) x
// so all-zero joints point both arms straight forward. Wrist yaw and hand
// opening do not move the sites.
SitePositions forward_kinematics(const Pose& pose, const RobotProfile& profile);

struct CartesianTrack {
  std::vector<Eigen::Vector3d> points;
  double dt = 1.0;
};

// Mean norm of the third forward difference divided by dt^3 over the T - 3
// available samples. Throws InsufficientDataError when T < 4.
double jerk(const CartesianTrack& track);
// Sum of consecutive displacement norms. Throws InsufficientDataError when T < 2.
double path_length(const CartesianTrack& track);
// jerk() of a scalar series.
double angular_jerk(std::span<const double> series, double dt);

// Pairwise (cascade) summation; the result does not depend on thread count.
double pairwise_sum(std::span<const double> values);

struct SiteStats {
  std::optional<double> jerk;   // unavailable when mu < 4
  std::optional<double> lpath;  // unavailable when mu < 2
};

struct MotionReport {
  int mu = 0;
  int units = 0;
  std::array<SiteStats, kSiteCount> sites;
  std::optional<double> head_jerk_yaw;    // psi
  std::optional<double> head_jerk_pitch;  // phi
};

// Per-unit metrics (unflatten, forward kinematics, jerk/lpath per site,
// angular jerk of head yaw and pitch) averaged over all units.
MotionReport motion_report(const GestureDataset& ds, const RobotProfile& profile);

}  // namespace gesteval

#endif  // GESTEVAL_MOTION_METRICS_H_
