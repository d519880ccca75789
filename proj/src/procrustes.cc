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

#include "gesteval/procrustes.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gesteval/core_model.h"
#include "gesteval/errors.h"

namespace gesteval {
namespace {

constexpr double kScaleEpsilon = 1e-12;

void check_centered(const Eigen::MatrixXd& m, double tol, const char* what) {
  const double scale = std::max(m.norm(), 1e-300);
  const Eigen::RowVectorXd means = m.colwise().mean();
  if (means.norm() * std::sqrt(static_cast<double>(m.rows())) > tol * scale) {
    throw StructuralError(std::string(what) + " configuration is not column-centered");
  }
}

}  // namespace

ProcrustesResult procrustes(const Eigen::MatrixXd& target, const Eigen::MatrixXd& generated,
                            int mu, const ProcrustesOptions& options) {
  if (target.rows() != generated.rows() || target.cols() != generated.cols()) {
    throw StructuralError("procrustes: configurations must have the same shape");
  }
  if (target.cols() < 1 || target.rows() < 1) {
    throw StructuralError("procrustes: empty configuration");
  }
  if (mu < 1) throw StructuralError("procrustes: mu must be positive");
  const double gen_norm2 = generated.squaredNorm();
  if (!(gen_norm2 > 0.0)) throw DegenerateError("procrustes: generated configuration is zero");
  check_centered(target, options.centering_tolerance, "target");
  check_centered(generated, options.centering_tolerance, "generated");

  const Eigen::MatrixXd cross = generated.transpose() * target;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sigma = svd.singularValues();
  Eigen::MatrixXd u = svd.matrixU();
  const Eigen::MatrixXd v = svd.matrixV();
  if (options.proper_rotation && (u * v.transpose()).determinant() < 0.0) {
    const Eigen::Index last = sigma.size() - 1;
    u.col(last) = -u.col(last);
    sigma(last) = -sigma(last);
  }

  ProcrustesResult r;
  r.mu = mu;
  r.rotation = u * v.transpose();
  const double trace = sigma.sum();
  if (trace > 0.0) {
    r.scale = trace / gen_norm2;
  } else {
    r.scale = kScaleEpsilon;
    r.scale_clamped = true;
  }
  r.ss = std::max(0.0, (target - r.scale * generated * r.rotation).squaredNorm());
  r.ss_normalized = r.ss / (static_cast<double>(kJointCount) * mu);
  return r;
}

}  // namespace gesteval
