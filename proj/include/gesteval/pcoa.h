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

#ifndef GESTEVAL_PCOA_H_
#define GESTEVAL_PCOA_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gesteval {

// Symmetric, zero-diagonal, non-negative dissimilarities between labeled items.
struct DistanceMatrix {
  Eigen::MatrixXd d;
  std::vector<std::string> labels;
  // Labels of constant columns whose correlations were undefined.
  std::vector<std::string> zero_variance;

  int size() const { return static_cast<int>(d.rows()); }
};

// Throws StructuralError unless `m` is square, symmetric within 1e-12,
// zero on the diagonal and non-negative.
void check_distance_matrix(const Eigen::MatrixXd& m);

// d_ij = sqrt(1 - r_ij), r_ij the Pearson correlation of data columns i and j.
// A constant column has r = 0 against every other column (d = 1) and is
// listed in zero_variance. Labels default to column_labels(cols / 14) when the
// width is a multiple of 14.
DistanceMatrix correlation_distance(const Eigen::MatrixXd& data,
                                    std::vector<std::string> labels = {});

// V = sum(d_ij^2) / (2 n^2).
double geometric_variability(const Eigen::MatrixXd& d);

// D / sqrt(V), so the result has geometric variability 1.
DistanceMatrix scale_to_unit_geometric_variability(const DistanceMatrix& dm);

struct PcoaResult {
  // n x l principal coordinates; column j has squared norm eigenvalues[j].
  Eigen::MatrixXd coordinates;
  // Retained eigenvalues, descending, all > tolerance * lambda_max.
  Eigen::VectorXd eigenvalues;
  // Full spectrum of the centered Gram matrix, descending (may hold negatives).
  Eigen::VectorXd spectrum;
  double dropped_negative_mass = 0.0;

  int dimensions() const { return static_cast<int>(eigenvalues.size()); }
};

// Classical scaling: eigendecomposition of B = -1/2 J D2 J with
// J = I - 11'/n. Each eigenvector is signed so that its largest-magnitude
// component is positive.
PcoaResult pcoa(const Eigen::MatrixXd& d, double tolerance = 1e-10);
inline PcoaResult pcoa(const DistanceMatrix& dm, double tolerance = 1e-10) {
  return pcoa(dm.d, tolerance);
}

// 100 * (sum of the first `dims` eigenvalues) / (sum of all retained ones).
double explained_variance(const PcoaResult& result, int dims);

struct R2Result {
  std::vector<double> r2;
  bool rank_deficient = false;
};

// For each column y_j of `target`: least squares of y_j on [1, predictors],
// R^2 = 1 - SSR / SST clamped into [0, 1]. Rank-deficient predictors fall
// back to the minimum-norm solution and set the flag.
R2Result r2_recovery(const Eigen::MatrixXd& target, const Eigen::MatrixXd& predictors);

// Summary of the fidelity comparison between an original and a generated
// dataset.
struct FidelityReport {
  std::vector<double> eigen_spectrum_original;   // first 28 (or fewer) eigenvalues
  std::vector<double> eigen_spectrum_generated;
  std::vector<double> r2;
  double explained_variance_original = 0.0;      // percent, first `dims`
  double explained_variance_generated = 0.0;
  int dims = 0;
  bool r2_rank_deficient = false;
  std::vector<std::string> zero_variance_original;
  std::vector<std::string> zero_variance_generated;
  double dropped_negative_mass_original = 0.0;
  double dropped_negative_mass_generated = 0.0;
};

// Correlation distance, unit geometric variability scaling and PCoA of the
// joint columns of one dataset matrix.
PcoaResult joint_pcoa(const Eigen::MatrixXd& data, DistanceMatrix* distances = nullptr);

struct FidelityAnalysis {
  FidelityReport report;
  PcoaResult original;
  PcoaResult generated;
};

FidelityAnalysis fidelity_analysis(const Eigen::MatrixXd& original,
                                   const Eigen::MatrixXd& generated, int dims = 10,
                                   int spectrum_length = 28);

// Grouped bar chart of both spectra.
std::string spectrum_svg(const FidelityReport& report, const std::string& title);

}  // namespace gesteval

#endif  // GESTEVAL_PCOA_H_
