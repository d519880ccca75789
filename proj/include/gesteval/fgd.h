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

#ifndef GESTEVAL_FGD_H_
#define GESTEVAL_FGD_H_

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "gesteval/core_model.h"
#include "gesteval/gmm.h"

namespace gesteval {

struct FeatureStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // unbiased, n - 1 denominator
  int n = 0;
};

// Mean and covariance of the rows of `features` (two passes).
FeatureStats feature_stats(const Eigen::MatrixXd& features);
// Statistics of the per-unit posterior vectors under `model`.
FeatureStats feature_stats(const GmmModel& model, const GestureDataset& ds);

struct FrechetDetail {
  double value = 0.0;
  // Squared mean difference, a lower bound of `value`.
  double mean_term = 0.0;
  // 1e-10 * I was added to both covariances because one was near singular.
  bool jitter_applied = false;
};

FrechetDetail frechet_distance_detail(const FeatureStats& a, const FeatureStats& b);
double frechet_distance(const FeatureStats& a, const FeatureStats& b);

// Symmetric eigendecomposition square root; negative eigenvalues count as 0.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

struct BootstrapSummary {
  int replicates = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator, 0 for a single replicate
};

struct FgdResult {
  double value = 0.0;
  bool jitter_applied = false;
  std::optional<BootstrapSummary> bootstrap;
};

// When bootstrap > 0 both datasets are resampled with replacement in each
// replicate; replicate r draws from CounterRng::derive(seed, r).
FgdResult fgd(const GmmModel& model, const GestureDataset& a, const GestureDataset& b,
              int bootstrap = 0, std::uint64_t seed = 0);

}  // namespace gesteval

#endif  // GESTEVAL_FGD_H_
