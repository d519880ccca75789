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

#ifndef GESTEVAL_GMM_H_
#define GESTEVAL_GMM_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gesteval/core_model.h"

namespace gesteval {

// Gaussian mixture whose K components share one covariance matrix.
class GmmModel {
 public:
  // weights: K, means: K x d, covariance: d x d symmetric positive definite.
  GmmModel(Eigen::VectorXd weights, Eigen::MatrixXd means, Eigen::MatrixXd covariance,
           int mu, double dt);

  int k() const { return static_cast<int>(weights_.size()); }
  int dimension() const { return static_cast<int>(means_.cols()); }
  int mu() const { return mu_; }
  double dt() const { return dt_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::MatrixXd& means() const { return means_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  // Lower Cholesky factor of the shared covariance.
  const Eigen::MatrixXd& cholesky() const { return chol_; }

  // N x K matrix of log(w_k) + log N(x_n | m_k, Sigma).
  Eigen::MatrixXd log_joint(const Eigen::MatrixXd& x) const;
  // Sum over rows of log p(x_n).
  double log_likelihood(const Eigen::MatrixXd& x) const;
  // N x K responsibilities, each row on the probability simplex.
  Eigen::MatrixXd posteriors(const Eigen::MatrixXd& x) const;

 private:
  Eigen::VectorXd weights_;
  Eigen::MatrixXd means_;
  Eigen::MatrixXd covariance_;
  int mu_;
  double dt_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
  Eigen::RowVectorXd center_;
};

struct GmmConfig {
  int max_iterations = 500;
  // Stop once the objective gains less than tolerance * |objective|.
  double tolerance = 1e-7;
  // eps = regularization * mean diagonal of the data covariance; eps * I is
  // added to every covariance update.
  double regularization = 1e-6;
};

struct GmmFit {
  GmmModel model;
  // Penalized log-likelihood LL - (N eps / 2) tr(Sigma^-1) after each E-step.
  // The eps*I update is the exact maximizer of this objective, so EM never
  // decreases it.
  std::vector<double> objective_history;
  std::vector<double> log_likelihood_history;
  int iterations = 0;
  bool converged = false;
  double epsilon = 0.0;
  // The data had no spread, so an absolute floor replaced the relative eps.
  bool covariance_floor_applied = false;
};

// EM with k-means++ seeding drawn from CounterRng(seed).
GmmFit fit_gmm(const Eigen::MatrixXd& data, int mu, double dt, int k, std::uint64_t seed,
               const GmmConfig& config = {});
GmmFit fit_gmm(const GestureDataset& ds, int k, std::uint64_t seed,
               const GmmConfig& config = {});

std::vector<double> posterior(const GmmModel& model, const UnitOfMovement& um);

// Component by weight, then x = mean + L z with z ~ N(0, I).
GestureDataset sample(const GmmModel& model, int n, std::uint64_t seed,
                      std::string source_tag = "gmm-sample");

// Versioned JSON text, matrices row-major.
void write_model(std::ostream& out, const GmmModel& model);
GmmModel read_model(std::istream& in);
void save_model(const GmmModel& model, const std::filesystem::path& path);
GmmModel load_model(const std::filesystem::path& path);

}  // namespace gesteval

#endif  // GESTEVAL_GMM_H_
