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

#include "gesteval/motion_metrics.h"

#include <cmath>

#include "gesteval/errors.h"

namespace gesteval {
namespace {

Eigen::Matrix3d rot(double angle, const Eigen::Vector3d& axis) {
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

}  // namespace

const Eigen::Vector3d& SitePositions::site(Site s) const {
  switch (s) {
    case Site::kLhand:
      return left_hand;
    case Site::kRhand:
      return right_hand;
    case Site::kLelbow:
      return left_elbow;
    case Site::kRelbow:
      break;
  }
  return right_elbow;
}

SitePositions forward_kinematics(const Pose& pose, const RobotProfile& profile) {
  const LinkLengths& links = profile.links();
  const Eigen::Vector3d x = Eigen::Vector3d::UnitX();
  auto arm = [&](double pitch, double roll, double elbow_yaw, double elbow_roll,
                 const Eigen::Vector3d& shoulder, Eigen::Vector3d& elbow,
                 Eigen::Vector3d& hand) {
    const Eigen::Matrix3d upper =
        rot(pitch, Eigen::Vector3d::UnitY()) * rot(roll, Eigen::Vector3d::UnitZ());
    const Eigen::Matrix3d fore =
        upper * rot(elbow_yaw, Eigen::Vector3d::UnitX()) * rot(elbow_roll, Eigen::Vector3d::UnitZ());
    elbow = shoulder + links.upper_arm * (upper * x);
    hand = elbow + links.forearm * (fore * x);
  };
  SitePositions s;
  s.left_shoulder = {0.0, links.shoulder_offset, 0.0};
  s.right_shoulder = {0.0, -links.shoulder_offset, 0.0};
  arm(pose[Joint::kLShoulderPitch], pose[Joint::kLShoulderRoll], pose[Joint::kLElbowYaw],
      pose[Joint::kLElbowRoll], s.left_shoulder, s.left_elbow, s.left_hand);
  arm(pose[Joint::kRShoulderPitch], pose[Joint::kRShoulderRoll], pose[Joint::kRElbowYaw],
      pose[Joint::kRElbowRoll], s.right_shoulder, s.right_elbow, s.right_hand);
  return s;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

template <typename T>
std::vector<T> forward_difference(const std::vector<T>& x, double dt) {
  std::vector<T> out;
  out.reserve(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) out.push_back((x[i + 1] - x[i]) / dt);
  return out;
}

}  // namespace

double jerk(const CartesianTrack& track) {
  if (track.points.size() < 4) throw InsufficientDataError("jerk needs at least 4 samples");
  if (!(track.dt > 0.0)) throw StructuralError("track dt must be positive");
  const auto velocity = forward_difference(track.points, track.dt);
  const auto accel = forward_difference(velocity, track.dt);
  const auto jerks = forward_difference(accel, track.dt);
  std::vector<double> norms;
  norms.reserve(jerks.size());
  for (const auto& j : jerks) norms.push_back(j.norm());
  return pairwise_sum(norms) / static_cast<double>(norms.size());
}

double path_length(const CartesianTrack& track) {
  if (track.points.size() < 2) throw InsufficientDataError("path length needs 2 samples");
  std::vector<double> steps;
  steps.reserve(track.points.size() - 1);
  for (std::size_t i = 1; i < track.points.size(); ++i) {
    steps.push_back((track.points[i] - track.points[i - 1]).norm());
  }
  return pairwise_sum(steps);
}

double angular_jerk(std::span<const double> series, double dt) {
  if (series.size() < 4) throw InsufficientDataError("jerk needs at least 4 samples");
  if (!(dt > 0.0)) throw StructuralError("dt must be positive");
  const std::vector<double> x(series.begin(), series.end());
  const auto jerks = forward_difference(forward_difference(forward_difference(x, dt), dt), dt);
  std::vector<double> values;
  values.reserve(jerks.size());
  for (double j : jerks) values.push_back(std::abs(j));
  return pairwise_sum(values) / static_cast<double>(values.size());
}

MotionReport motion_report(const GestureDataset& ds, const RobotProfile& profile) {
  MotionReport report;
  report.mu = ds.mu();
  report.units = ds.size();
  const bool has_jerk = ds.mu() >= 4;
  const bool has_path = ds.mu() >= 2;
  const std::size_t n = static_cast<std::size_t>(ds.size());

  std::array<std::vector<double>, kSiteCount> site_jerk, site_path;
  std::vector<double> yaw_jerk, pitch_jerk;
  for (const auto& um : ds.units()) {
    const std::vector<Pose> poses = unflatten(um);
    std::array<CartesianTrack, kSiteCount> tracks;
    std::vector<double> yaw, pitch;
    for (auto& t : tracks) t.dt = um.dt();
    for (const Pose& p : poses) {
      const SitePositions fk = forward_kinematics(p, profile);
      for (int s = 0; s < kSiteCount; ++s) {
        tracks[s].points.push_back(fk.site(static_cast<Site>(s)));
      }
      yaw.push_back(p[Joint::kHeadYaw]);
      pitch.push_back(p[Joint::kHeadPitch]);
    }
    for (int s = 0; s < kSiteCount; ++s) {
      if (has_jerk) site_jerk[s].push_back(jerk(tracks[s]));
      if (has_path) site_path[s].push_back(path_length(tracks[s]));
    }
    if (has_jerk) {
      yaw_jerk.push_back(angular_jerk(yaw, um.dt()));
      pitch_jerk.push_back(angular_jerk(pitch, um.dt()));
    }
  }
  auto mean = [n](const std::vector<double>& v) {
    return pairwise_sum(v) / static_cast<double>(n);
  };
  for (int s = 0; s < kSiteCount; ++s) {
    if (has_jerk) report.sites[s].jerk = mean(site_jerk[s]);
    if (has_path) report.sites[s].lpath = mean(site_path[s]);
  }
  if (has_jerk) {
    report.head_jerk_yaw = mean(yaw_jerk);
    report.head_jerk_pitch = mean(pitch_jerk);
  }
  return report;
}

}  // namespace gesteval
