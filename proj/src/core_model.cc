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

#include "gesteval/core_model.h"

#include <cmath>
#include <sstream>

#include "gesteval/errors.h"
#include "gesteval/key_value.h"
#include "gesteval/text.h"

namespace gesteval {

std::string_view joint_name(Joint j) { return kJointNames[index(j)]; }

std::optional<Joint> joint_from_name(std::string_view name) {
  for (int j = 0; j < kJointCount; ++j) {
    if (kJointNames[j] == name) return static_cast<Joint>(j);
  }
  return std::nullopt;
}

RobotProfile::RobotProfile(const std::array<Interval, kJointCount>& limits,
                           LinkLengths links)
    : limits_(limits), links_(links) {
  for (int j = 0; j < kJointCount; ++j) {
    const Interval& iv = limits_[j];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
      throw StructuralError("empty or non-finite limit interval for " +
                            std::string(kJointNames[j]));
    }
  }
  for (Joint hand : {Joint::kLHandOpen, Joint::kRHandOpen}) {
    if (limit(hand).lo != 0.0 || limit(hand).hi != 1.0) {
      throw StructuralError(std::string(joint_name(hand)) + " limits must be [0, 1]");
    }
  }
  if (!(links_.upper_arm > 0.0) || !(links_.forearm > 0.0) ||
      !(links_.shoulder_offset > 0.0)) {
    throw StructuralError("link lengths must be strictly positive");
  }
}

RobotProfile RobotProfile::pepper() {
  constexpr double kYaw = 2.0857;
  constexpr double kRoll = 1.5620;
  constexpr double kRollMin = 0.0087;
  constexpr double kWrist = 1.8239;
  std::array<Interval, kJointCount> limits = {{
      {-kYaw, kYaw},           // HeadYaw
      {-0.7068, 0.6371},       // HeadPitch
      {-kYaw, kYaw},           // LShoulderPitch
      {kRollMin, kRoll},       // LShoulderRoll
      {-kYaw, kYaw},           // LElbowYaw
      {-kRoll, -kRollMin},     // LElbowRoll
      {-kWrist, kWrist},       // LWristYaw
      {0.0, 1.0},              // LHandOpen
      {-kYaw, kYaw},           // RShoulderPitch
      {-kRoll, -kRollMin},     // RShoulderRoll
      {-kYaw, kYaw},           // RElbowYaw
      {kRollMin, kRoll},       // RElbowRoll
      {-kWrist, kWrist},       // RWristYaw
      {0.0, 1.0},              // RHandOpen
  }};
  return RobotProfile(limits, LinkLengths{0.1812, 0.150, 0.14974});
}

RobotProfile RobotProfile::from_document(const KeyValueDocument& doc) {
  static const char* kLinkKeys[] = {"upper_arm_length", "forearm_length",
                                    "shoulder_offset"};
  for (const auto& [key, value] : doc.entries()) {
    bool known = joint_from_name(key).has_value();
    for (const char* k : kLinkKeys) known = known || key == k;
    if (!known) throw ParseError("unknown profile key '" + key + "'", doc.line_of(key));
  }
  std::array<Interval, kJointCount> limits;
  for (int j = 0; j < kJointCount; ++j) {
    const auto v = doc.numbers(std::string(kJointNames[j]), 2);
    limits[j] = {v[0], v[1]};
  }
  LinkLengths links{doc.number("upper_arm_length"), doc.number("forearm_length"),
                    doc.number("shoulder_offset")};
  return RobotProfile(limits, links);
}

RobotProfile RobotProfile::load(const std::filesystem::path& path) {
  return from_document(KeyValueDocument::load(path));
}

std::string RobotProfile::to_document() const {
  std::ostringstream out;
  out << "# joint = min, max (radians; hand opening in [0, 1])\n";
  for (int j = 0; j < kJointCount; ++j) {
    out << kJointNames[j] << " = " << format_double(limits_[j].lo) << ", "
        << format_double(limits_[j].hi) << "\n";
  }
  out << "# link lengths in meters\n";
  out << "upper_arm_length = " << format_double(links_.upper_arm) << "\n";
  out << "forearm_length = " << format_double(links_.forearm) << "\n";
  out << "shoulder_offset = " << format_double(links_.shoulder_offset) << "\n";
  return out.str();
}

Pose Pose::from_values(std::span<const double> values, std::optional<double> timestamp) {
  if (values.size() != kJointCount) {
    throw StructuralError("pose needs 14 joint values, got " +
                          std::to_string(values.size()));
  }
  Pose p;
  std::copy(values.begin(), values.end(), p.values.begin());
  p.timestamp = timestamp;
  return p;
}

Pose validate_pose(const Pose& pose, const RobotProfile& profile) {
  Pose out = pose;
  for (int j = 0; j < kJointCount; ++j) {
    const double v = pose.values[j];
    const double c = profile.limit(j).clamp(v);
    if (c != v) out.clamped.set(j);
    out.values[j] = c;
  }
  return out;
}

UnitOfMovement::UnitOfMovement(int mu, std::vector<double> flat, double dt)
    : mu_(mu), flat_(std::move(flat)), dt_(dt) {
  if (mu_ <= 0) throw StructuralError("unit of movement needs mu >= 1");
  if (flat_.size() != static_cast<std::size_t>(kJointCount) * mu_) {
    throw StructuralError("unit of movement with mu=" + std::to_string(mu_) +
                          " needs " + std::to_string(kJointCount * mu_) +
                          " values, got " + std::to_string(flat_.size()));
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw StructuralError("unit of movement needs dt > 0");
  }
}

std::span<const double> UnitOfMovement::pose_values(int k) const {
  if (k < 0 || k >= mu_) throw StructuralError("pose index out of range");
  return std::span<const double>(flat_).subspan(static_cast<std::size_t>(k) * kJointCount,
                                                kJointCount);
}

UnitOfMovement flatten_window(std::span<const Pose> poses, double dt) {
  if (poses.empty()) throw StructuralError("cannot flatten an empty window");
  std::vector<double> flat;
  flat.reserve(poses.size() * kJointCount);
  for (const Pose& p : poses) flat.insert(flat.end(), p.values.begin(), p.values.end());
  return UnitOfMovement(static_cast<int>(poses.size()), std::move(flat), dt);
}

std::vector<Pose> unflatten(const UnitOfMovement& um) {
  std::vector<Pose> poses;
  poses.reserve(um.mu());
  for (int k = 0; k < um.mu(); ++k) {
    poses.push_back(Pose::from_values(um.pose_values(k), k * um.dt()));
  }
  return poses;
}

GestureDataset::GestureDataset(std::vector<UnitOfMovement> units, std::string source_tag,
                               double sample_rate_hz)
    : units_(std::move(units)),
      source_tag_(std::move(source_tag)),
      sample_rate_hz_(sample_rate_hz) {
  if (units_.empty()) throw StructuralError("dataset needs at least one unit");
  if (!(sample_rate_hz_ > 0.0)) throw StructuralError("sample rate must be positive");
  const int mu0 = units_.front().mu();
  const double dt0 = units_.front().dt();
  for (const auto& u : units_) {
    if (u.mu() != mu0 || u.dt() != dt0) {
      throw StructuralError("dataset units must share mu and dt");
    }
  }
  if (std::abs(dt0 * sample_rate_hz_ - 1.0) > 1e-9) {
    throw StructuralError("unit dt does not match the dataset sample rate");
  }
}

GestureDataset GestureDataset::from_matrix(const Eigen::MatrixXd& data, int mu,
                                           double sample_rate_hz, std::string source_tag) {
  if (mu <= 0 || data.cols() != kJointCount * mu) {
    throw StructuralError("matrix width " + std::to_string(data.cols()) +
                          " does not match mu=" + std::to_string(mu));
  }
  if (!(sample_rate_hz > 0.0)) throw StructuralError("sample rate must be positive");
  std::vector<UnitOfMovement> units;
  units.reserve(data.rows());
  const double dt = 1.0 / sample_rate_hz;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    std::vector<double> flat(data.cols());
    for (Eigen::Index c = 0; c < data.cols(); ++c) flat[c] = data(i, c);
    units.emplace_back(mu, std::move(flat), dt);
  }
  return GestureDataset(std::move(units), std::move(source_tag), sample_rate_hz);
}

Eigen::MatrixXd as_matrix(const GestureDataset& ds) {
  Eigen::MatrixXd m(ds.size(), ds.dimension());
  for (int i = 0; i < ds.size(); ++i) {
    const auto& flat = ds.unit(i).flat();
    for (int c = 0; c < ds.dimension(); ++c) m(i, c) = flat[c];
  }
  return m;
}

std::vector<std::string> column_labels(int mu) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(kJointCount) * mu);
  for (int k = 0; k < mu; ++k) {
    for (int j = 0; j < kJointCount; ++j) {
      labels.push_back(std::string(kJointNames[j]) + "@t+" + std::to_string(k));
    }
  }
  return labels;
}

}  // namespace gesteval
