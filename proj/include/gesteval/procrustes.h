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

#ifndef GESTEVAL_PROCRUSTES_H_
#define GESTEVAL_PROCRUSTES_H_

#include <Eigen/Dense>

namespace gesteval {

struct ProcrustesOptions {
  // Restrict Q to det(Q) = +1. The default admits reflections.
  bool proper_rotation = false;
  // Relative tolerance for the column-centering check.
  double centering_tolerance = 1e-8;
};

struct ProcrustesResult {
  double ss = 0.0;             // ||Y_O - s Y_G Q||_F^2 at the optimum
  double scale = 1.0;          // s > 0
  Eigen::MatrixXd rotation;    // Q, orthogonal l x l
  double ss_normalized = 0.0;  // ss / (14 mu)
  int mu = 0;
  // The optimal trace was not positive, so s was clamped to a tiny epsilon.
  bool scale_clamped = false;
};

// Orthogonal Procrustes fit of `generated` onto `target` (both n x l,
// column-centered). Throws StructuralError on shape mismatch or uncentered
// input and DegenerateError when `generated` is all zero.
ProcrustesResult procrustes(const Eigen::MatrixXd& target, const Eigen::MatrixXd& generated,
                            int mu, const ProcrustesOptions& options = {});

}  // namespace gesteval

#endif  // GESTEVAL_PROCRUSTES_H_
