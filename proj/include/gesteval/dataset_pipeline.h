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

#ifndef GESTEVAL_DATASET_PIPELINE_H_
#define GESTEVAL_DATASET_PIPELINE_H_

#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "gesteval/core_model.h"

namespace gesteval {

// Timestamped pose sequence. Every pose carries a timestamp and timestamps
// are strictly increasing.
class PoseStream {
 public:
  PoseStream(std::vector<Pose> poses, double native_rate_hz);

  // Poses at t0 + k / rate_hz.
  static PoseStream uniform(std::vector<Pose> poses, double rate_hz, double t0 = 0.0);

  int size() const { return static_cast<int>(poses_.size()); }
  bool empty() const { return poses_.empty(); }
  double native_rate_hz() const { return native_rate_hz_; }
  const std::vector<Pose>& poses() const { return poses_; }
  const Pose& pose(int i) const { return poses_.at(i); }
  double time(int i) const { return *poses_.at(i).timestamp; }

 private:
  std::vector<Pose> poses_;
  double native_rate_hz_;
};

// Linear interpolation onto t0 + k / target_hz for every grid time within
// the source span (grid points within 1e-9 s of the last timestamp snap to it).
PoseStream resample(const PoseStream& stream, double target_hz);

// Truncates the longer stream to the length of the shorter one.
std::pair<PoseStream, PoseStream> match_lengths(const PoseStream& a, const PoseStream& b);

// Consecutive windows of mu poses starting every `stride` poses (stride 0
// means stride = mu, i.e. non-overlapping). A trailing remainder shorter than
// mu is dropped.
GestureDataset window(const PoseStream& stream, int mu, int stride = 0,
                      std::string source_tag = "stream");

// Dataset CSV: '#mu,<n>', '#rate_hz,<r>', '#source,<tag>' comment lines, one
// header row of column labels, then one unit per row.
void write_dataset(std::ostream& out, const GestureDataset& ds);
GestureDataset read_dataset(std::istream& in);
void save_dataset(const GestureDataset& ds, const std::filesystem::path& path);
GestureDataset load_dataset(const std::filesystem::path& path);

// Pose stream CSV: '#rate_hz,<r>' then a header 'timestamp,HeadYaw,...' and
// one pose per row.
void write_pose_stream(std::ostream& out, const PoseStream& stream);
PoseStream read_pose_stream(std::istream& in);
void save_pose_stream(const PoseStream& stream, const std::filesystem::path& path);
PoseStream load_pose_stream(const std::filesystem::path& path);

// Plain numeric CSV matrix (optional header row of non-numeric labels).
Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd load_matrix_csv(const std::filesystem::path& path);

}  // namespace gesteval

#endif  // GESTEVAL_DATASET_PIPELINE_H_
