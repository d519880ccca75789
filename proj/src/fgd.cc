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

#include "gesteval/fgd.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>
#include <vector>

#include "gesteval/errors.h"
#include "gesteval/rng.h"

namespace gesteval {

namespace {

constexpr double kJitter = 1e-10;

void check_symmetric(const Eigen::MatrixXd& m, const char* name) {
  if (m.rows() != m.cols()) throw StructuralError(std::string(name) + " covariance is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw StructuralError(std::string(name) + " covariance is not symmetric");
}

Eigen::MatrixXd dataset_posteriors(const GmmModel& model, const GestureDataset& ds) {
  if (ds.dimension() != model.dimension())
    throw StructuralError("dataset dimension " + std::to_string(ds.dimension()) +
                          " does not match model dimension " +
                          std::to_string(model.dimension()));
  return model.posteriors(as_matrix(ds));
}

Eigen::MatrixXd resample_rows(const Eigen::MatrixXd& m, CounterRng& rng) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    out.row(i) = m.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m.rows()))));
  return out;
}

}  // namespace

FeatureStats feature_stats(const Eigen::MatrixXd& features) {
  if (features.rows() < 2)
    throw InsufficientDataError("feature statistics need at least 2 samples, got " +
                                std::to_string(features.rows()));
  FeatureStats s;
  s.n = static_cast<int>(features.rows());
  s.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - s.mean.transpose();
  s.covariance = centered.transpose() * centered / static_cast<double>(s.n - 1);
  s.covariance = 0.5 * (s.covariance + s.covariance.transpose());
  return s;
}

FeatureStats feature_stats(const GmmModel& model, const GestureDataset& ds) {
  return feature_stats(dataset_posteriors(model, ds));
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw DegenerateError("eigendecomposition failed");
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

// Tr((R_b S_a R_b)^1/2) with R_b = S_b^1/2.
double sqrt_trace(const Eigen::MatrixXd& sa, const Eigen::MatrixXd& sb) {
  const Eigen::MatrixXd rb = psd_sqrt(sb);
  Eigen::MatrixXd sandwich = rb * sa * rb;
  sandwich = 0.5 * (sandwich + sandwich.transpose());
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sandwich, Eigen::EigenvaluesOnly)
          .eigenvalues();
  return ev.cwiseMax(0.0).cwiseSqrt().sum();
}

}  // namespace

FrechetDetail frechet_distance_detail(const FeatureStats& a, const FeatureStats& b) {
  if (a.mean.size() != b.mean.size() || a.covariance.rows() != a.mean.size() ||
      b.covariance.rows() != b.mean.size())
    throw StructuralError("feature statistics have mismatched dimensions");
  check_symmetric(a.covariance, "first");
  check_symmetric(b.covariance, "second");

  FrechetDetail out;
  out.mean_term = (a.mean - b.mean).squaredNorm();

  Eigen::MatrixXd sa = a.covariance;
  Eigen::MatrixXd sb = b.covariance;
  const double min_a = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sa, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
  const double min_b = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sb, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
  if (min_a < kJitter || min_b < kJitter) {
    sa.diagonal().array() += kJitter;
    sb.diagonal().array() += kJitter;
    out.jitter_applied = true;
  }

  // Both sandwich orders agree in exact arithmetic; averaging them keeps the
  // distance symmetric when near-null directions make either one noisy.
  const double cross = 0.5 * (sqrt_trace(sa, sb) + sqrt_trace(sb, sa));
  const double value = out.mean_term + sa.trace() + sb.trace() - 2.0 * cross;
  out.value = std::max(0.0, value);
  return out;
}

double frechet_distance(const FeatureStats& a, const FeatureStats& b) {
  return frechet_distance_detail(a, b).value;
}

FgdResult fgd(const GmmModel& model, const GestureDataset& a, const GestureDataset& b,
              int bootstrap, std::uint64_t seed) {
  if (bootstrap < 0) throw StructuralError("bootstrap count must be non-negative");
  const Eigen::MatrixXd pa = dataset_posteriors(model, a);
  const Eigen::MatrixXd pb = dataset_posteriors(model, b);
  const FrechetDetail base = frechet_distance_detail(feature_stats(pa), feature_stats(pb));
  FgdResult result;
  result.value = base.value;
  result.jitter_applied = base.jitter_applied;
  if (bootstrap == 0) return result;

  std::vector<double> values(static_cast<std::size_t>(bootstrap));
  auto run_range = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      CounterRng rng(CounterRng::derive(seed, static_cast<std::uint64_t>(r)));
      const Eigen::MatrixXd ra = resample_rows(pa, rng);
      const Eigen::MatrixXd rb = resample_rows(pb, rng);
      values[r] = frechet_distance(feature_stats(ra), feature_stats(rb));
    }
  };
  const int workers =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, bootstrap);
  std::vector<std::future<void>> jobs;
  for (int w = 1; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, run_range, bootstrap * w / workers,
                              bootstrap * (w + 1) / workers));
  run_range(0, bootstrap / workers);
  for (auto& j : jobs) j.get();

  BootstrapSummary s;
  s.replicates = bootstrap;
  s.seed = seed;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / bootstrap;
  if (bootstrap > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (bootstrap - 1));
  }
  result.bootstrap = s;
  return result;
}

}  // namespace gesteval
