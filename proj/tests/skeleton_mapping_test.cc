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

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "gesteval/errors.h"
#include "gesteval/key_value.h"
#include "gesteval/rng.h"

namespace gesteval {
namespace {

constexpr double kPi = std::numbers::pi;

double affine_oracle(double x, double slo, double shi, double dlo, double dhi) {
  const double t = std::min(1.0, std::max(0.0, (x - slo) / (shi - slo)));
  return dlo + t * (dhi - dlo);
}

struct Fixture : ::testing::Test {
  RobotProfile profile = RobotProfile::pepper();
  MappingParams params = MappingParams::defaults(profile);
};

// Person facing the camera: body left = camera +x, up = +y, forward = +z.
SkeletonFrame upright_openpose() {
  SkeletonFrame f = SkeletonFrame::empty(SkeletonLayout::kOpenPose25);
  f.set("Neck", {0, 0.5, 0});
  f.set("MidHip", {0, 0, 0});
  f.set("LShoulder", {0.15, 0.5, 0});
  f.set("RShoulder", {-0.15, 0.5, 0});
  f.set("Nose", {0, 0.7, 0.02});
  return f;
}

HandKeypoints planar_hand(const std::vector<Eigen::Vector2d>& pts) {
  // pts: wrist, thumb, index, middle, ring, pinky
  HandKeypoints h(hand_kp::kCount);
  const int idx[] = {hand_kp::kWrist, hand_kp::kThumbTip, hand_kp::kIndexTip,
                     hand_kp::kMiddleTip, hand_kp::kRingTip, hand_kp::kPinkyTip};
  for (int i = 0; i < 6; ++i) h[idx[i]] = Keypoint{Vec3(pts[i].x(), pts[i].y(), 0.0), 1.0};
  return h;
}

std::vector<Eigen::Vector2d> fingers_above() {
  return {{0.5, -0.5}, {0, 0}, {0.3, 0.5}, {0.5, 0.6}, {0.7, 0.5}, {1, 0}};
}

std::vector<Eigen::Vector2d> fingers_below() {
  return {{0.5, 0.5}, {0, 0}, {0.3, -0.5}, {0.5, -0.6}, {0.7, -0.5}, {1, 0}};
}

TEST(RangeConvTest, EndpointsMidpointAndClamp) {
  const RangeMap m{1.0, 3.0, 10.0, -10.0};
  EXPECT_DOUBLE_EQ(range_conv(1.0, m), 10.0);
  EXPECT_DOUBLE_EQ(range_conv(3.0, m), -10.0);
  EXPECT_DOUBLE_EQ(range_conv(2.0, m), 0.0);
  EXPECT_DOUBLE_EQ(range_conv(0.0, m), 10.0);
  EXPECT_DOUBLE_EQ(range_conv(9.0, m), -10.0);
}

TEST(RangeConvTest, MonotoneOnSource) {
  const RangeMap m{0.0, 1.0, -2.0, 5.0};
  double prev = range_conv(-0.5, m);
  for (int i = -49; i <= 150; ++i) {
    const double v = range_conv(i / 100.0, m);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST_F(Fixture, OpenNIHeadYaw) {
  const Vec3 neck(0, 0, 0), head(0, 0.2, 0);
  EXPECT_DOUBLE_EQ(map_head_openni({0, 0, 0}, neck, head, params, profile).yaw, 0.0);
  EXPECT_NEAR(map_head_openni({0, 0.2, 0}, neck, head, params, profile).yaw, 0.2, 1e-12);
}

TEST_F(Fixture, OpenNIHeadPitchMatchesTrigOracle) {
  CounterRng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Vec3 neck(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(1, 3));
    const Vec3 head = neck + Vec3(rng.uniform(-0.05, 0.05), rng.uniform(0.1, 0.3),
                                  rng.uniform(-0.1, 0.1));
    const double gamma = rng.uniform(-0.5, 0.5);
    params.k2 = 0.3;
    const HeadAngles h = map_head_openni({0, 0, gamma}, neck, head, params, profile);
    // Depth away from the camera and height, rotated by -pi/2 as a complex number.
    const std::complex<double> v(neck.z() - head.z(), head.y() - neck.y());
    const double expected = std::arg(v * std::polar(1.0, -kPi / 2)) + std::abs(0.3 * gamma);
    EXPECT_NEAR(h.pitch, profile.limit(Joint::kHeadPitch).clamp(expected), 1e-9);
  }
}

TEST_F(Fixture, OpenNIHeadDirectlyAboveNeck) {
  const HeadAngles h = map_head_openni({}, {0, 0, 2}, {0, 0.25, 2}, params, profile);
  EXPECT_NEAR(h.pitch, 0.0, 1e-12);
}

TEST_F(Fixture, OpenPoseHead) {
  const HeadAngles up = map_head_openpose({0, 0.2, 0}, {0, 0, 0}, params);
  EXPECT_NEAR(up.yaw, profile.limit(Joint::kHeadYaw).midpoint(), 1e-12);
  const HeadAngles lo = map_head_openpose({0, 0.10, 0}, {0, 0, 0}, params);
  EXPECT_NEAR(lo.pitch, params.head_pitch.dst_lo, 1e-12);
  // Normalized x component 0.5 -> asin gives pi/6.
  const Vec3 nn(0.5, std::sqrt(0.75), 0.0);
  const HeadAngles side = map_head_openpose(0.2 * nn, {0, 0, 0}, params);
  EXPECT_NEAR(side.yaw,
              affine_oracle(-kPi / 6, -kPi / 2, kPi / 2, -2.0857, 2.0857), 1e-9);
  EXPECT_THROW(map_head_openpose({1, 1, 1}, {1, 1, 1}, params), DegenerateGeometryError);
}

TEST(HandSideTest, RightAndLeftHands) {
  EXPECT_EQ(map_hand_side_openpose(planar_hand(fingers_above()), Side::kRight), HandSide::kBack);
  EXPECT_EQ(map_hand_side_openpose(planar_hand(fingers_below()), Side::kRight), HandSide::kPalm);
  EXPECT_EQ(map_hand_side_openpose(planar_hand(fingers_below()), Side::kLeft), HandSide::kBack);
  EXPECT_EQ(map_hand_side_openpose(planar_hand(fingers_above()), Side::kLeft), HandSide::kPalm);
}

TEST(HandSideTest, TwoOfThreeDecides) {
  auto pts = fingers_above();
  pts[4] = {0.7, -0.5};
  EXPECT_EQ(map_hand_side_openpose(planar_hand(pts), Side::kRight), HandSide::kBack);
  pts[3] = {0.5, -0.6};
  EXPECT_EQ(map_hand_side_openpose(planar_hand(pts), Side::kRight), HandSide::kPalm);
}

TEST(HandSideTest, InvariantUnderInPlaneRotationAndScale) {
  CounterRng rng(37);
  for (const auto& base : {fingers_above(), fingers_below()}) {
    for (Side side : {Side::kLeft, Side::kRight}) {
      const HandSide ref = map_hand_side_openpose(planar_hand(base), side);
      for (int t = 0; t < 100; ++t) {
        const double angle = t == 0 ? 37.0 * kPi / 180.0 : rng.uniform(-kPi, kPi);
        const double scale = rng.uniform(0.05, 20.0);
        const Eigen::Vector2d shift(rng.uniform(-5, 5), rng.uniform(-5, 5));
        const Eigen::Matrix2d r = Eigen::Rotation2Dd(angle).toRotationMatrix();
        std::vector<Eigen::Vector2d> moved;
        for (const auto& p : base) moved.push_back(scale * (r * p) + shift);
        EXPECT_EQ(map_hand_side_openpose(planar_hand(moved), side), ref);
      }
    }
  }
}

HandKeypoints thumb_pinky(double distance) {
  auto pts = fingers_above();
  pts[1] = {0, 0};
  pts[5] = {distance, 0};
  return planar_hand(pts);
}

TEST_F(Fixture, HandYawOpenPose) {
  const double w = params.max_wrist_yaw;
  EXPECT_NEAR(map_hand_yaw_openpose(thumb_pinky(0.02), 0.1, params), -w, 1e-12);
  EXPECT_NEAR(map_hand_yaw_openpose(thumb_pinky(0.09), 0.1, params), 0.0, 1e-12);
  EXPECT_NEAR(map_hand_yaw_openpose(thumb_pinky(0.12), 0.1, params),
              affine_oracle(0.12, 0.02, 0.16, -w, w), 1e-12);
}

TEST_F(Fixture, HandYawShiftsBelowReferenceHeight) {
  const double w = params.max_wrist_yaw;
  // 0.1 m below the reference: source interval moves up by 0.05.
  EXPECT_NEAR(map_hand_yaw_openpose(thumb_pinky(0.12), -0.1, params),
              affine_oracle(0.12, 0.07, 0.21, -w, w), 1e-12);
}

TEST_F(Fixture, HandOpening) {
  auto hand_with = [](double d) {
    auto pts = fingers_above();
    pts[0] = {0, 0};
    pts[3] = {0, d};
    return planar_hand(pts);
  };
  EXPECT_NEAR(map_hand_opening_openpose(hand_with(0.20), params), 1.0, 1e-12);
  EXPECT_NEAR(map_hand_opening_openpose(hand_with(0.08), params), 0.0, 1e-12);
  EXPECT_NEAR(map_hand_opening_openpose(hand_with(0.14), params), 0.5, 1e-12);
  EXPECT_NEAR(map_hand_opening_openpose(hand_with(0.5), params), 1.0, 1e-12);
}

TEST_F(Fixture, HandYawOpenNI) {
  const double n = params.n_pixels, w = params.max_wrist_yaw;
  EXPECT_NEAR(map_hand_yaw_openni(n, 10, params), w, 1e-12);
  EXPECT_NEAR(map_hand_yaw_openni(10, n, params), 0.0, 1e-12);
  EXPECT_NEAR(map_hand_yaw_openni(n / 2, 10, params), w / 2, 1e-12);
  EXPECT_NEAR(map_hand_yaw_openni(10, n / 2, params), -w / 2, 1e-12);
  EXPECT_THROW(map_hand_yaw_openni(0, 0, params), UnknownOrientationError);
  EXPECT_THROW(map_hand_yaw_openni(-1, 0, params), StructuralError);
}

TEST(BodyFrameTest, UprightPerson) {
  const BodyFrame b = body_frame({0, 0.5, 0}, {0, 0, 0}, {0.15, 0.5, 0}, {-0.15, 0.5, 0});
  EXPECT_NEAR((b.forward - Vec3(0, 0, 1)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((b.left - Vec3(1, 0, 0)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((b.up - Vec3(0, 1, 0)).norm(), 0.0, 1e-12);
  EXPECT_THROW(body_frame({0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {-1, 0, 0}), DegenerateGeometryError);
}

Vec3 chain_upper(double p, double r) {
  return Eigen::AngleAxisd(p, Vec3::UnitY()) * (Eigen::AngleAxisd(r, Vec3::UnitZ()) * Vec3::UnitX());
}

Vec3 chain_fore(double p, double r, double ey, double er) {
  return Eigen::AngleAxisd(p, Vec3::UnitY()) *
         (Eigen::AngleAxisd(r, Vec3::UnitZ()) *
          (Eigen::AngleAxisd(ey, Vec3::UnitX()) * (Eigen::AngleAxisd(er, Vec3::UnitZ()) * Vec3::UnitX())));
}

TEST(ArmAnglesTest, HangingAndBent) {
  const BodyFrame b = body_frame({0, 0.5, 0}, {0, 0, 0}, {0.15, 0.5, 0}, {-0.15, 0.5, 0});
  const Vec3 s(0.15, 0.5, 0);
  const ArmAngles down = arm_angles(s, s + Vec3(0, -0.18, 0), s + Vec3(0, -0.33, 0), b, Side::kLeft);
  EXPECT_NEAR(down.elbow_roll, 0.0, 1e-12);
  const ArmAngles bent =
      arm_angles(s, s + Vec3(0, -0.18, 0), s + Vec3(0, -0.18, 0.15), b, Side::kLeft);
  EXPECT_NEAR(bent.elbow_roll, -kPi / 2, 1e-12);
  const Vec3 rs(-0.15, 0.5, 0);
  const ArmAngles rbent =
      arm_angles(rs, rs + Vec3(0, -0.18, 0), rs + Vec3(0, -0.18, 0.15), b, Side::kRight);
  EXPECT_NEAR(rbent.elbow_roll, kPi / 2, 1e-12);
}

TEST(ArmAnglesTest, RecoversRandomChains) {
  CounterRng rng(5);
  // Tilted, translated body.
  const Eigen::Matrix3d tilt =
      (Eigen::AngleAxisd(0.3, Vec3::UnitY()) * Eigen::AngleAxisd(0.1, Vec3::UnitX())).toRotationMatrix();
  const Vec3 origin(0.2, -0.1, 2.5);
  auto cam = [&](const Vec3& v) { return Vec3(tilt * v + origin); };
  const Vec3 neck = cam({0, 0.5, 0}), hip = cam({0, 0, 0});
  const Vec3 ls = cam({0.15, 0.5, 0}), rs = cam({-0.15, 0.5, 0});
  const BodyFrame b = body_frame(neck, hip, ls, rs);
  const Eigen::Matrix3d to_cam = (Eigen::Matrix3d() << b.forward, b.left, b.up).finished();
  for (int t = 0; t < 200; ++t) {
    const Side side = t % 2 ? Side::kRight : Side::kLeft;
    const double sign = side == Side::kLeft ? 1.0 : -1.0;
    const double p = rng.uniform(-2.0, 2.0);
    const double r = sign * rng.uniform(0.05, 1.5);
    const double ey = rng.uniform(-2.5, 2.5);
    const double er = -sign * rng.uniform(0.05, 2.5);
    const Vec3 shoulder = side == Side::kLeft ? ls : rs;
    const Vec3 elbow = shoulder + 0.18 * (to_cam * chain_upper(p, r));
    const Vec3 wrist = elbow + 0.15 * (to_cam * chain_fore(p, r, ey, er));
    const ArmAngles a = arm_angles(shoulder, elbow, wrist, b, side);
    EXPECT_NEAR(a.shoulder_pitch, p, 1e-9);
    EXPECT_NEAR(a.shoulder_roll, r, 1e-9);
    EXPECT_NEAR(a.elbow_yaw, ey, 1e-9);
    EXPECT_NEAR(a.elbow_roll, er, 1e-9);
    // Independent dot-product oracles.
    const Vec3 u = (elbow - shoulder).normalized(), v = (wrist - elbow).normalized();
    EXPECT_NEAR(std::abs(a.elbow_roll), std::acos(std::clamp(u.dot(v), -1.0, 1.0)), 1e-7);
    EXPECT_NEAR(a.shoulder_roll, kPi / 2 - std::acos(std::clamp(u.dot(b.left), -1.0, 1.0)), 1e-7);
  }
}

TEST_F(Fixture, TPose) {
  SkeletonFrame f = upright_openpose();
  f.set("LElbow", {0.33, 0.5, 0});
  f.set("LWrist", {0.48, 0.5, 0});
  f.set("RElbow", {-0.33, 0.5, 0});
  f.set("RWrist", {-0.48, 0.5, 0});
  const auto arms = map_arms(f, profile);
  EXPECT_NEAR(arms[1], profile.limit(Joint::kLShoulderRoll).hi, 1e-12);
  EXPECT_NEAR(arms[5], profile.limit(Joint::kRShoulderRoll).lo, 1e-12);
  EXPECT_NEAR(arms[3], profile.limit(Joint::kLElbowRoll).hi, 1e-12);
  EXPECT_NEAR(arms[7], profile.limit(Joint::kRElbowRoll).lo, 1e-12);
}

TEST_F(Fixture, MissingArmKeypoints) {
  EXPECT_THROW(map_arms(upright_openpose(), profile), MissingKeypointError);
}

SkeletonFrame full_openpose() {
  SkeletonFrame f = upright_openpose();
  f.set("LElbow", {0.17, 0.32, 0.02});
  f.set("LWrist", {0.2, 0.2, 0.15});
  f.set("RElbow", {-0.17, 0.32, 0.02});
  f.set("RWrist", {-0.22, 0.25, 0.12});
  auto shift = [](HandKeypoints h, const Vec3& o) {
    for (auto& k : h)
      if (k) k->position = k->position * 0.1 + o;
    return h;
  };
  f.left_hand = shift(planar_hand(fingers_above()), {0.2, 0.2, 0.15});
  f.right_hand = shift(planar_hand(fingers_below()), {-0.22, 0.25, 0.12});
  return f;
}

TEST_F(Fixture, MapFrameRespectsLimitsAndIsDeterministic) {
  MappingStream a(params, profile, 4), b(params, profile, 4);
  const SkeletonFrame f = full_openpose();
  const Pose p1 = a.map(f);
  const Pose p2 = a.map(f);
  EXPECT_EQ(p1.values, p2.values);
  EXPECT_EQ(b.map(f).values, p1.values);
  for (int j = 0; j < kJointCount; ++j) EXPECT_TRUE(profile.limit(j).contains(p1.values[j]));
}

TEST_F(Fixture, MissingHandHoldsPreviousValues) {
  MappingStream s(params, profile, 4);
  const Pose first = s.map(full_openpose());
  SkeletonFrame f = full_openpose();
  f.left_hand.reset();
  f.set("LElbow", {0.2, 0.3, 0.05});
  const Pose second = s.map(f);
  EXPECT_EQ(second[Joint::kLWristYaw], first[Joint::kLWristYaw]);
  EXPECT_EQ(second[Joint::kLHandOpen], first[Joint::kLHandOpen]);
  EXPECT_NE(second[Joint::kLShoulderRoll], first[Joint::kLShoulderRoll]);
}

TEST_F(Fixture, OpenNIFingersAreSeeded) {
  SkeletonFrame f = SkeletonFrame::empty(SkeletonLayout::kOpenNI15);
  f.set("Head", {0, 0.7, 0});
  f.set("Neck", {0, 0.5, 0});
  f.head_orientation = HeadOrientation{0, 0.1, 0};
  f.left_glove = GloveCounts{1500, 100};
  MappingStream a(params, profile, 9), b(params, profile, 9);
  const Pose pa = a.map(f), pb = b.map(f);
  EXPECT_EQ(pa.values, pb.values);
  EXPECT_NEAR(pa[Joint::kHeadYaw], 0.1, 1e-12);
  EXPECT_NEAR(pa[Joint::kLWristYaw], 1500 / params.n_pixels * params.max_wrist_yaw, 1e-12);
  const Pose pa2 = a.map(f);
  EXPECT_NE(pa2[Joint::kLHandOpen], pa[Joint::kLHandOpen]);
}

TEST_F(Fixture, ParamsRejectUnknownKeys) {
  EXPECT_THROW(MappingParams::from_document(KeyValueDocument::parse("k3 = 1\n"), profile),
               ParseError);
  const auto p = MappingParams::from_document(
      KeyValueDocument::parse("k2 = 0.5\nhand_open.source = 0.05, 0.25\n"), profile);
  EXPECT_DOUBLE_EQ(p.k2, 0.5);
  EXPECT_DOUBLE_EQ(p.hand_open.src_hi, 0.25);
}

}  // namespace
}  // namespace gesteval
