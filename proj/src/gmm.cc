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

#include "gesteval/gmm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "gesteval/errors.h"
#include "gesteval/rng.h"

namespace gesteval {

namespace {

constexpr double kAbsoluteFloor = 1e-10;
constexpr char kFormatName[] = "gesteval-gmm";
constexpr int kFormatVersion = 1;

double log_sum_exp(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  const double m = row.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((row.array() - m).exp().sum());
}

}  // namespace

GmmModel::GmmModel(Eigen::VectorXd weights, Eigen::MatrixXd means, Eigen::MatrixXd covariance,
                   int mu, double dt)
    : weights_(std::move(weights)),
      means_(std::move(means)),
      covariance_(std::move(covariance)),
      mu_(mu),
      dt_(dt) {
  const Eigen::Index k = weights_.size();
  if (k < 1) throw StructuralError("gmm needs at least one component");
  if (means_.rows() != k) throw StructuralError("gmm means must have one row per component");
  const Eigen::Index d = means_.cols();
  if (d < 1 || covariance_.rows() != d || covariance_.cols() != d)
    throw StructuralError("gmm covariance must be d x d");
  if (mu < 1 || d != static_cast<Eigen::Index>(kJointCount) * mu)
    throw StructuralError("gmm dimension must equal 14 * mu");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StructuralError("gmm dt must be positive");
  if ((weights_.array() < 0.0).any() || !weights_.allFinite())
    throw StructuralError("gmm weights must be non-negative");
  if (std::abs(weights_.sum() - 1.0) > 1e-10) throw StructuralError("gmm weights must sum to 1");
  if (!means_.allFinite() || !covariance_.allFinite())
    throw StructuralError("gmm parameters must be finite");
  const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw StructuralError("gmm covariance must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
  if (llt.info() != Eigen::Success)
    throw StructuralError("gmm covariance must be positive definite");
  chol_ = llt.matrixL();
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
  center_ = weights_.transpose() * means_;
}

Eigen::MatrixXd GmmModel::log_joint(const Eigen::MatrixXd& x) const {
  if (x.cols() != dimension())
    throw StructuralError("expected " + std::to_string(dimension()) + " columns, got " +
                          std::to_string(x.cols()));
  const auto l = chol_.triangularView<Eigen::Lower>();
  // Whitened, recentered coordinates keep the expansion of the quadratic form
  // well conditioned.
  const Eigen::MatrixXd z = l.solve((x.rowwise() - center_).transpose());
  const Eigen::MatrixXd w = l.solve((means_.rowwise() - center_).transpose());
  const Eigen::VectorXd zz = z.colwise().squaredNorm().transpose();
  const Eigen::RowVectorXd ww = w.colwise().squaredNorm();
  Eigen::MatrixXd maha = -2.0 * (z.transpose() * w);
  maha.colwise() += zz;
  maha.rowwise() += ww;
  maha = maha.cwiseMax(0.0);
  const double c = -0.5 * (static_cast<double>(dimension()) * std::log(2.0 * std::numbers::pi) +
                           log_det_);
  Eigen::MatrixXd out = (-0.5 * maha).array() + c;
  for (int j = 0; j < k(); ++j) {
    const double lw = weights_(j) > 0.0 ? std::log(weights_(j))
                                        : -std::numeric_limits<double>::infinity();
    out.col(j).array() += lw;
  }
  return out;
}

double GmmModel::log_likelihood(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd lj = log_joint(x);
  double total = 0.0;
  for (Eigen::Index n = 0; n < lj.rows(); ++n) total += log_sum_exp(lj.row(n));
  return total;
}

Eigen::MatrixXd GmmModel::posteriors(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd lj = log_joint(x);
  for (Eigen::Index n = 0; n < lj.rows(); ++n) {
    const double lse = log_sum_exp(lj.row(n));
    lj.row(n) = (lj.row(n).array() - lse).exp();
    lj.row(n) /= lj.row(n).sum();
  }
  return lj;
}

namespace {

struct EStep {
  Eigen::MatrixXd resp;
  double log_likelihood = 0.0;
};

EStep e_step(const GmmModel& model, const Eigen::MatrixXd& x) {
  EStep e;
  e.resp = model.log_joint(x);
  for (Eigen::Index n = 0; n < e.resp.rows(); ++n) {
    const double lse = log_sum_exp(e.resp.row(n));
    e.log_likelihood += lse;
    e.resp.row(n) = (e.resp.row(n).array() - lse).exp();
    e.resp.row(n) /= e.resp.row(n).sum();
  }
  return e;
}

double penalty(const GmmModel& model, double n, double eps) {
  const auto l = model.cholesky().triangularView<Eigen::Lower>();
  const Eigen::MatrixXd inv_l =
      l.solve(Eigen::MatrixXd::Identity(model.dimension(), model.dimension()));
  return 0.5 * n * eps * inv_l.squaredNorm();
}

// Shared covariance from responsibilities on centered data:
// (X'X - sum_k N_k m_k m_k') / N + eps I.
GmmModel m_step(const Eigen::MatrixXd& xc, const Eigen::MatrixXd& xtx,
                const Eigen::MatrixXd& resp, const Eigen::MatrixXd& previous_means,
                const Eigen::RowVectorXd& offset, double eps, int mu, double dt) {
  const double n = static_cast<double>(xc.rows());
  const Eigen::Index k = resp.cols();
  const Eigen::Index d = xc.cols();
  Eigen::VectorXd nk = resp.colwise().sum().transpose();
  Eigen::MatrixXd means = resp.transpose() * xc;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (nk(j) > 1e-12 * n) {
      means.row(j) /= nk(j);
    } else {
      // Empty component: keep its previous location.
      means.row(j) = previous_means.row(j) - offset;
      nk(j) = 0.0;
    }
  }
  Eigen::MatrixXd cov = xtx - means.transpose() * nk.asDiagonal() * means;
  cov /= n;
  cov = 0.5 * (cov + cov.transpose());
  cov.diagonal().array() += eps;
  Eigen::VectorXd weights = nk / nk.sum();
  Eigen::MatrixXd abs_means = means.rowwise() + offset;
  (void)d;
  return GmmModel(std::move(weights), std::move(abs_means), std::move(cov), mu, dt);
}

// Greedy k-means++: each step draws several D^2-weighted candidates and keeps
// the one with the lowest resulting potential.
Eigen::MatrixXd kmeans_pp(const Eigen::MatrixXd& x, int k, CounterRng& rng) {
  const Eigen::Index n = x.rows();
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  Eigen::MatrixXd centers(k, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::VectorXd best_d2;
    double best_potential = std::numeric_limits<double>::infinity();
    Eigen::Index best = 0;
    for (int t = 0; t < trials; ++t) {
      Eigen::Index pick = 0;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        pick = n - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
          acc += d2(i);
          if (acc > target && d2(i) > 0.0) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
      }
      Eigen::VectorXd cand = d2.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
      const double potential = cand.sum();
      if (potential < best_potential) {
        best_potential = potential;
        best = pick;
        best_d2 = std::move(cand);
      }
    }
    centers.row(c) = x.row(best);
    d2 = std::move(best_d2);
  }
  return centers;
}

}  // namespace

GmmFit fit_gmm(const Eigen::MatrixXd& data, int mu, double dt, int k, std::uint64_t seed,
               const GmmConfig& config) {
  if (k < 1) throw StructuralError("k must be at least 1");
  if (data.rows() < k)
    throw StructuralError("need at least k = " + std::to_string(k) + " units, got " +
                          std::to_string(data.rows()));
  if (data.cols() != static_cast<Eigen::Index>(kJointCount) * mu)
    throw StructuralError("data width must equal 14 * mu");
  if (!data.allFinite()) throw StructuralError("data must be finite");
  if (config.max_iterations < 1) throw StructuralError("max_iterations must be at least 1");

  const double n = static_cast<double>(data.rows());
  const Eigen::RowVectorXd offset = data.colwise().mean();
  const Eigen::MatrixXd xc = data.rowwise() - offset;
  const Eigen::MatrixXd xtx = xc.transpose() * xc;
  const double mean_var = xtx.diagonal().mean() / n;

  double eps = config.regularization * mean_var;
  bool floored = false;
  if (!(eps > kAbsoluteFloor)) {
    eps = kAbsoluteFloor;
    floored = true;
  }

  CounterRng rng(seed);
  const Eigen::MatrixXd centers = kmeans_pp(xc, k, rng);
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(data.rows(), k);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    Eigen::Index best = 0;
    (centers.rowwise() - xc.row(i)).rowwise().squaredNorm().minCoeff(&best);
    resp(i, best) = 1.0;
  }

  GmmModel model = m_step(xc, xtx, resp, centers.rowwise() + offset, offset, eps, mu, dt);
  EStep e = e_step(model, data);
  double objective = e.log_likelihood - penalty(model, n, eps);

  GmmFit fit{model, {objective}, {e.log_likelihood}, 0, false, eps, floored};
  for (int it = 1; it <= config.max_iterations; ++it) {
    GmmModel next = m_step(xc, xtx, e.resp, model.means(), offset, eps, mu, dt);
    EStep e_next = e_step(next, data);
    const double obj_next = e_next.log_likelihood - penalty(next, n, eps);
    fit.objective_history.push_back(obj_next);
    fit.log_likelihood_history.push_back(e_next.log_likelihood);
    fit.iterations = it;
    const double gain = obj_next - objective;
    model = std::move(next);
    e = std::move(e_next);
    objective = obj_next;
    if (gain < config.tolerance * std::abs(obj_next)) {
      fit.converged = true;
      break;
    }
  }
  fit.model = std::move(model);
  return fit;
}

GmmFit fit_gmm(const GestureDataset& ds, int k, std::uint64_t seed, const GmmConfig& config) {
  return fit_gmm(as_matrix(ds), ds.mu(), ds.dt(), k, seed, config);
}

std::vector<double> posterior(const GmmModel& model, const UnitOfMovement& um) {
  if (um.dimension() != model.dimension())
    throw StructuralError("unit dimension " + std::to_string(um.dimension()) +
                          " does not match model dimension " +
                          std::to_string(model.dimension()));
  const Eigen::Map<const Eigen::RowVectorXd> row(um.flat().data(), um.dimension());
  const Eigen::MatrixXd p = model.posteriors(row);
  return {p.data(), p.data() + p.size()};
}

GestureDataset sample(const GmmModel& model, int n, std::uint64_t seed,
                      std::string source_tag) {
  if (n < 1) throw StructuralError("sample count must be at least 1");
  CounterRng rng(seed);
  const int d = model.dimension();
  std::vector<double> cumulative(model.k());
  double acc = 0.0;
  for (int j = 0; j < model.k(); ++j) cumulative[j] = (acc += model.weights()(j));
  Eigen::MatrixXd out(n, d);
  Eigen::VectorXd z(d);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform() * acc;
    int comp = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                cumulative.begin());
    comp = std::min(comp, model.k() - 1);
    while (comp > 0 && model.weights()(comp) == 0.0) --comp;
    for (int j = 0; j < d; ++j) z(j) = rng.normal();
    out.row(i) = model.means().row(comp) +
                 (model.cholesky().triangularView<Eigen::Lower>() * z).transpose();
  }
  return GestureDataset::from_matrix(out, model.mu(), 1.0 / model.dt(), std::move(source_tag));
}

void write_model(std::ostream& out, const GmmModel& model) {
  nlohmann::json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["k"] = model.k();
  j["d"] = model.dimension();
  j["mu"] = model.mu();
  j["dt"] = model.dt();
  j["weights"] = std::vector<double>(model.weights().data(),
                                     model.weights().data() + model.k());
  auto rows = [](const Eigen::MatrixXd& m) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::vector<double> row(m.cols());
      for (Eigen::Index c = 0; c < m.cols(); ++c) row[c] = m(r, c);
      a.push_back(std::move(row));
    }
    return a;
  };
  j["means"] = rows(model.means());
  j["covariance"] = rows(model.covariance());
  out << j.dump() << '\n';
}

GmmModel read_model(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormatName)
      throw ParseError("not a gesteval-gmm model file");
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion)
      throw ParseError("unsupported model version " + std::to_string(version));
    const int k = j.at("k").get<int>();
    const int d = j.at("d").get<int>();
    const int mu = j.at("mu").get<int>();
    const double dt = j.at("dt").get<double>();
    if (k < 1 || d < 1) throw ParseError("model declares empty shape");
    if (d != kJointCount * mu) throw ParseError("model d does not equal 14 * mu");
    const auto w = j.at("weights").get<std::vector<double>>();
    if (static_cast<int>(w.size()) != k) throw ParseError("weights length does not match k");
    auto matrix = [](const nlohmann::json& a, int rows, int cols, const char* name) {
      if (!a.is_array() || static_cast<int>(a.size()) != rows)
        throw ParseError(std::string(name) + " has wrong row count");
      Eigen::MatrixXd m(rows, cols);
      for (int r = 0; r < rows; ++r) {
        const auto row = a[r].get<std::vector<double>>();
        if (static_cast<int>(row.size()) != cols)
          throw ParseError(std::string(name) + " row " + std::to_string(r) +
                               " has wrong length");
        for (int c = 0; c < cols; ++c) m(r, c) = row[c];
      }
      return m;
    };
    Eigen::MatrixXd means = matrix(j.at("means"), k, d, "means");
    Eigen::MatrixXd cov = matrix(j.at("covariance"), d, d, "covariance");
    return GmmModel(Eigen::Map<const Eigen::VectorXd>(w.data(), k), std::move(means),
                    std::move(cov), mu, dt);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const GmmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_model(out, model);
  if (!out) throw Error("failed writing " + path.string());
}

GmmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_model(in);
}

}  // namespace gesteval
