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

#include "gesteval/pcoa.h"

#include <cmath>

#include <gtest/gtest.h>

#include "gesteval/errors.h"
#include "test_util.h"

namespace gesteval {
namespace {

using testing::pairwise_distances;
using testing::random_matrix;

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  return ca.dot(cb) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

TEST(CorrelationDistanceTest, SelfAndNegation) {
  Eigen::MatrixXd x(5, 3);
  x.col(0) << 1, 2, 4, 3, 5;
  x.col(1) = x.col(0);
  x.col(2) = -x.col(0);
  const DistanceMatrix d = correlation_distance(x, {"a", "b", "c"});
  EXPECT_NEAR(d.d(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(d.d(0, 2), std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(d.zero_variance.empty());
}

TEST(CorrelationDistanceTest, HandComputedHalfCorrelation) {
  Eigen::MatrixXd x(5, 2);
  x.col(0) << -2, -1, 0, 1, 2;
  x.col(1) << -1, 0, -1, 2, 0;
  // sum xy = 2 + 0 + 0 + 2 + 0 = 4; |x|^2 = 10; |y|^2 = 6 -> r = 4/sqrt(60)
  const double r = 4.0 / std::sqrt(60.0);
  EXPECT_NEAR(pearson(x.col(0), x.col(1)), r, 1e-15);
  const DistanceMatrix d = correlation_distance(x, {"a", "b"});
  EXPECT_NEAR(d.d(0, 1), std::sqrt(1.0 - r), 1e-12);

  Eigen::MatrixXd h(4, 2);
  h.col(0) << 1, -1, 1, -1;
  h.col(1) << 1, -1, 1, 1;
  // centered second column (0.5,-1.5,0.5,0.5): r = 2 / sqrt(4 * 3) = 1/sqrt(3)
  EXPECT_NEAR(correlation_distance(h, {"a", "b"}).d(0, 1), std::sqrt(1.0 - 1.0 / std::sqrt(3.0)),
              1e-12);
}

TEST(CorrelationDistanceTest, ExactHalfCorrelation) {
  Eigen::MatrixXd x(4, 2);
  x.col(0) << 1, 1, -1, -1;
  x.col(1) << 1, -1, 1, -1;
  x.col(1) = 0.5 * x.col(0) + std::sqrt(0.75) * x.col(1);
  EXPECT_NEAR(correlation_distance(x, {"a", "b"}).d(0, 1), std::sqrt(0.5), 1e-12);
}

TEST(CorrelationDistanceTest, ZeroVarianceColumnReported) {
  CounterRng rng(1);
  Eigen::MatrixXd x = random_matrix(6, 14, rng);
  x.col(3).setConstant(0.7);
  const DistanceMatrix d = correlation_distance(x);
  ASSERT_EQ(d.zero_variance.size(), 1u);
  EXPECT_EQ(d.zero_variance[0], "LShoulderRoll@t+0");
  EXPECT_DOUBLE_EQ(d.d(3, 0), 1.0);
  EXPECT_DOUBLE_EQ(d.d(3, 3), 0.0);
}

TEST(CorrelationDistanceTest, AffineInvariant) {
  CounterRng rng(2);
  Eigen::MatrixXd x = random_matrix(20, 6, rng);
  Eigen::MatrixXd y = x;
  for (int c = 0; c < 6; ++c) y.col(c) = y.col(c).array() * (0.5 + c) + 3.0 * c;
  EXPECT_LT((correlation_distance(x).d - correlation_distance(y).d).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CorrelationDistanceTest, NeedsThreeRows) {
  EXPECT_THROW(correlation_distance(Eigen::MatrixXd::Ones(2, 3)), InsufficientDataError);
}

TEST(GeometricVariabilityTest, ScalingProperties) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 2, 2, 0;
  EXPECT_DOUBLE_EQ(geometric_variability(d), 1.0);
  DistanceMatrix dm{d, {"a", "b"}, {}};
  EXPECT_DOUBLE_EQ(scale_to_unit_geometric_variability(dm).d(0, 1), 2.0);

  Eigen::MatrixXd e(3, 3);
  e << 0, 3, 4, 3, 0, 5, 4, 5, 0;
  // V = 2 * (9 + 16 + 25) / (2 * 9) = 50 / 9
  EXPECT_NEAR(geometric_variability(e), 50.0 / 9.0, 1e-14);
  const DistanceMatrix once = scale_to_unit_geometric_variability({e, {}, {}});
  const DistanceMatrix twice = scale_to_unit_geometric_variability(once);
  EXPECT_NEAR(geometric_variability(once.d), 1.0, 1e-12);
  EXPECT_LT((once.d - twice.d).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(scale_to_unit_geometric_variability({Eigen::MatrixXd::Zero(3, 3), {}, {}}),
               DegenerateError);
}

TEST(CheckDistanceMatrixTest, RejectsAsymmetry) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1.1, 0;
  EXPECT_THROW(check_distance_matrix(d), StructuralError);
  d << 0.1, 1, 1, 0;
  EXPECT_THROW(check_distance_matrix(d), StructuralError);
}

TEST(PcoaTest, RightTriangle) {
  Eigen::MatrixXd d(3, 3);
  d << 0, 3, 4, 3, 0, 5, 4, 5, 0;
  const PcoaResult r = pcoa(d);
  EXPECT_EQ(r.dimensions(), 2);
  EXPECT_LT((pairwise_distances(r.coordinates) - d).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(PcoaTest, IdenticalPointsHaveNoDimensions) {
  EXPECT_EQ(pcoa(Eigen::MatrixXd::Zero(4, 4)).dimensions(), 0);
}

TEST(PcoaTest, CollinearPoints) {
  Eigen::MatrixXd x(4, 1);
  x << 0, 1, 2, 3;
  const PcoaResult r = pcoa(pairwise_distances(x));
  const double positive = r.eigenvalues.sum();
  EXPECT_GE(r.eigenvalues(0) / positive, 0.9999);
}

TEST(PcoaTest, RandomEuclideanConfigurations) {
  CounterRng rng(8);
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + static_cast<int>(rng.below(18));
    const int dim = 1 + static_cast<int>(rng.below(5));
    const Eigen::MatrixXd x = random_matrix(n, dim, rng);
    const Eigen::MatrixXd d = pairwise_distances(x);
    const PcoaResult r = pcoa(d);
    EXPECT_LE(r.dimensions(), dim);
    const Eigen::MatrixXd back = pairwise_distances(r.coordinates);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) EXPECT_NEAR(back(i, j), d(i, j), 1e-8 * d(i, j));
    for (int k = 1; k < r.spectrum.size(); ++k) EXPECT_LE(r.spectrum(k), r.spectrum(k - 1));
    // The spectrum sums to the trace of the centered Gram matrix.
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    EXPECT_NEAR(r.spectrum.sum(), c.squaredNorm(), 1e-8 * c.squaredNorm());
    // Coordinates are centered and the sign rule holds.
    for (int k = 0; k < r.dimensions(); ++k) {
      EXPECT_NEAR(r.coordinates.col(k).sum(), 0.0, 1e-9);
      Eigen::Index arg;
      r.coordinates.col(k).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(r.coordinates(arg, k), 0.0);
    }
  }
}

TEST(ExplainedVarianceTest, Arithmetic) {
  PcoaResult r;
  r.eigenvalues = Eigen::Vector2d(9, 1);
  EXPECT_DOUBLE_EQ(explained_variance(r, 1), 90.0);
  EXPECT_DOUBLE_EQ(explained_variance(r, 2), 100.0);
  EXPECT_THROW(explained_variance(r, 3), StructuralError);
}

TEST(R2RecoveryTest, SelfAndReparameterized) {
  CounterRng rng(4);
  const Eigen::MatrixXd y = random_matrix(56, 10, rng);
  for (double v : r2_recovery(y, y).r2) EXPECT_NEAR(v, 1.0, 1e-12);
  const Eigen::MatrixXd a = random_matrix(10, 10, rng);
  const R2Result r = r2_recovery(y, y * a);
  EXPECT_FALSE(r.rank_deficient);
  for (double v : r.r2) EXPECT_NEAR(v, 1.0, 1e-9);
}

TEST(R2RecoveryTest, MatchesNormalEquations) {
  CounterRng rng(6);
  const Eigen::MatrixXd y = random_matrix(200, 4, rng);
  const Eigen::MatrixXd g = random_matrix(200, 10, rng);
  const R2Result r = r2_recovery(y, g);
  Eigen::MatrixXd x(200, 11);
  x.col(0).setOnes();
  x.rightCols(10) = g;
  const Eigen::MatrixXd beta = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  for (int j = 0; j < 4; ++j) {
    const Eigen::VectorXd res = y.col(j) - x * beta.col(j);
    const double sst = (y.col(j).array() - y.col(j).mean()).matrix().squaredNorm();
    EXPECT_NEAR(r.r2[j], 1.0 - res.squaredNorm() / sst, 1e-10);
    EXPECT_LT(r.r2[j], 0.2);
  }
  // Invariance to column sign flips of the target and reparameterization of the predictors.
  Eigen::MatrixXd yf = y;
  yf.col(1) *= -1.0;
  const R2Result rf = r2_recovery(yf, g * random_matrix(10, 10, rng));
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(rf.r2[j], r.r2[j], 1e-9);
}

TEST(R2RecoveryTest, RankDeficientIsFlagged) {
  CounterRng rng(7);
  const Eigen::MatrixXd y = random_matrix(30, 2, rng);
  Eigen::MatrixXd g = random_matrix(30, 3, rng);
  g.col(2) = g.col(0) + g.col(1);
  const R2Result r = r2_recovery(y, g);
  EXPECT_TRUE(r.rank_deficient);
  for (double v : r.r2) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(FidelityTest, SelfComparison) {
  const GestureDataset ds = testing::random_dataset(100, 4, 12);
  const Eigen::MatrixXd m = as_matrix(ds);
  const FidelityAnalysis a = fidelity_analysis(m, m);
  EXPECT_EQ(a.report.dims, 10);
  ASSERT_EQ(a.report.r2.size(), 10u);
  for (double v : a.report.r2) EXPECT_NEAR(v, 1.0, 1e-8);
  EXPECT_EQ(a.report.eigen_spectrum_original, a.report.eigen_spectrum_generated);
  EXPECT_EQ(a.report.eigen_spectrum_original.size(), 28u);
}

TEST(FidelityTest, SpectrumSvgMentionsBothSeries) {
  FidelityReport r;
  r.eigen_spectrum_original = {3, 2, 1};
  r.eigen_spectrum_generated = {2.5, 2, 0.5};
  const std::string svg = spectrum_svg(r, "a & b");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("a &amp; b"), std::string::npos);
  EXPECT_NE(svg.find("generated"), std::string::npos);
}

}  // namespace
}  // namespace gesteval
