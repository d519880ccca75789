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

#ifndef GESTEVAL_SKELETON_IO_H_
#define GESTEVAL_SKELETON_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "gesteval/skeleton_mapping.h"

namespace gesteval {

// One JSON object per line:
//   {"layout": "openpose" | "openni", "timestamp": <s>,
//    "body": {"Neck": [x, y, z, c], ...}            named keypoints, or
//    "pose_keypoints_3d": [x, y, z, c, ...]          layout order, stride 4,
//    "hand_left_keypoints_3d": [84 numbers],         OpenPose only
//    "hand_right_keypoints_3d": [84 numbers],        OpenPose only
//    "head_orientation": [alpha, beta, gamma],       OpenNI only
//    "glove_left": [palm, back], "glove_right": [palm, back]}   OpenNI only
// In the flat arrays a keypoint with confidence 0 is treated as not detected.
SkeletonFrame parse_skeleton_record(const std::string& line, int lineno = 0);
std::string format_skeleton_record(const SkeletonFrame& frame);
std::vector<SkeletonFrame> read_skeleton_records(std::istream& in);

SkeletonLayout parse_layout(const std::string& name);
std::string layout_name(SkeletonLayout layout);

}  // namespace gesteval

#endif  // GESTEVAL_SKELETON_IO_H_
