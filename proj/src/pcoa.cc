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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gesteval/core_model.h"
#include "gesteval/errors.h"
#include "gesteval/text.h"

namespace gesteval {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void check_distance_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw StructuralError("distance matrix must be square");
  if (!m.allFinite()) throw StructuralError("distance matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) throw StructuralError("distance matrix diagonal must be zero");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw StructuralError("distance matrix must be symmetric");
      }
      if (m(i, j) < 0.0) throw StructuralError("distances must be non-negative");
    }
  }
}

DistanceMatrix correlation_distance(const Eigen::MatrixXd& data,
                                    std::vector<std::string> labels) {
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  if (n < 3) throw InsufficientDataError("correlation distance needs at least 3 rows");
  if (!data.allFinite()) throw StructuralError("data has non-finite entries");
  if (labels.empty()) {
    if (p % kJointCount == 0) {
      labels = column_labels(static_cast<int>(p / kJointCount));
    } else {
      for (Eigen::Index c = 0; c < p; ++c) labels.push_back("c" + std::to_string(c));
    }
  }
  if (static_cast<Eigen::Index>(labels.size()) != p) {
    throw StructuralError("label count does not match column count");
  }

  Eigen::MatrixXd z = data.rowwise() - data.colwise().mean();
  std::vector<bool> constant(p, false);
  DistanceMatrix out;
  for (Eigen::Index c = 0; c < p; ++c) {
    const double norm = z.col(c).norm();
    const double ref = data.col(c).norm();
    if (norm <= 1e-12 * ref || norm == 0.0) {
      constant[c] = true;
      z.col(c).setZero();
      out.zero_variance.push_back(labels[c]);
    } else {
      z.col(c) /= norm;
    }
  }
  const Eigen::MatrixXd r = z.transpose() * z;
  out.d.setZero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double rij = (constant[i] || constant[j]) ? 0.0 : std::clamp(r(i, j), -1.0, 1.0);
      const double dij = std::sqrt(std::max(0.0, 1.0 - rij));
      out.d(i, j) = dij;
      out.d(j, i) = dij;
    }
  }
  out.labels = std::move(labels);
  return out;
}

double geometric_variability(const Eigen::MatrixXd& d) {
  const double n = static_cast<double>(d.rows());
  return d.squaredNorm() / (2.0 * n * n);
}

DistanceMatrix scale_to_unit_geometric_variability(const DistanceMatrix& dm) {
  check_distance_matrix(dm.d);
  if (dm.size() == 0) throw DegenerateError("empty distance matrix");
  const double v = geometric_variability(dm.d);
  if (!(v > 0.0)) throw DegenerateError("all-zero distance matrix cannot be scaled");
  DistanceMatrix out = dm;
  out.d /= std::sqrt(v);
  return out;
}

PcoaResult pcoa(const Eigen::MatrixXd& d, double tolerance) {
  check_distance_matrix(d);
  const Eigen::Index n = d.rows();
  if (n < 2) throw StructuralError("PCoA needs at least 2 items");

  const Eigen::MatrixXd d2 = d.cwiseProduct(d);
  const Eigen::VectorXd row_mean = d2.rowwise().mean();
  const double grand = row_mean.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (d2(i, j) - row_mean(i) - row_mean(j) + grand);
    }
  }
  b = 0.5 * (b + b.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw DegenerateError("eigendecomposition failed");
  const Eigen::VectorXd values = eig.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();

  PcoaResult result;
  result.spectrum = values;
  const double lambda_max = std::max(values(0), 0.0);
  Eigen::Index kept = 0;
  while (kept < n && lambda_max > 0.0 && values(kept) > tolerance * lambda_max) ++kept;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (values(k) < 0.0) result.dropped_negative_mass += -values(k);
  }
  result.eigenvalues = values.head(kept);
  result.coordinates.resize(n, kept);
  for (Eigen::Index k = 0; k < kept; ++k) {
    Eigen::VectorXd v = vectors.col(k);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    result.coordinates.col(k) = v * std::sqrt(values(k));
  }
  return result;
}

double explained_variance(const PcoaResult& result, int dims) {
  if (dims < 1 || dims > result.dimensions()) {
    throw StructuralError("explained_variance: dims must be in [1, " +
                          std::to_string(result.dimensions()) + "]");
  }
  const double total = result.eigenvalues.sum();
  if (!(total > 0.0)) throw DegenerateError("no positive eigenvalues");
  return 100.0 * result.eigenvalues.head(dims).sum() / total;
}

R2Result r2_recovery(const Eigen::MatrixXd& target, const Eigen::MatrixXd& predictors) {
  if (target.rows() != predictors.rows()) {
    throw StructuralError("r2_recovery: configurations need the same number of rows");
  }
  const Eigen::Index n = target.rows();
  if (n < 2) throw InsufficientDataError("r2_recovery needs at least 2 rows");
  Eigen::MatrixXd x(n, predictors.cols() + 1);
  x.col(0).setOnes();
  x.rightCols(predictors.cols()) = predictors;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x);
  R2Result out;
  out.rank_deficient = cod.rank() < x.cols();
  const Eigen::MatrixXd beta = cod.solve(target);
  const Eigen::MatrixXd residual = target - x * beta;
  for (Eigen::Index j = 0; j < target.cols(); ++j) {
    const double ssr = residual.col(j).squaredNorm();
    const double sst = (target.col(j).array() - target.col(j).mean()).matrix().squaredNorm();
    double r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    out.r2.push_back(std::clamp(r2, 0.0, 1.0));
  }
  return out;
}

PcoaResult joint_pcoa(const Eigen::MatrixXd& data, DistanceMatrix* distances) {
  DistanceMatrix dm = scale_to_unit_geometric_variability(correlation_distance(data));
  PcoaResult result = pcoa(dm);
  if (distances) *distances = std::move(dm);
  return result;
}

FidelityAnalysis fidelity_analysis(const Eigen::MatrixXd& original,
                                   const Eigen::MatrixXd& generated, int dims,
                                   int spectrum_length) {
  if (original.cols() != generated.cols()) {
    throw StructuralError("original and generated data need the same number of columns");
  }
  if (dims < 1) throw StructuralError("dims must be positive");
  FidelityAnalysis a;
  DistanceMatrix d_orig, d_gen;
  a.original = joint_pcoa(original, &d_orig);
  a.generated = joint_pcoa(generated, &d_gen);
  const int usable = std::min({dims, a.original.dimensions(), a.generated.dimensions()});
  if (usable < 1) throw DegenerateError("no retained principal coordinates");

  FidelityReport& r = a.report;
  r.dims = usable;
  auto head = [spectrum_length](const PcoaResult& p) {
    const int m = std::min(spectrum_length, p.dimensions());
    return std::vector<double>(p.eigenvalues.data(), p.eigenvalues.data() + m);
  };
  r.eigen_spectrum_original = head(a.original);
  r.eigen_spectrum_generated = head(a.generated);
  r.explained_variance_original = explained_variance(a.original, usable);
  r.explained_variance_generated = explained_variance(a.generated, usable);
  const R2Result r2 = r2_recovery(a.original.coordinates.leftCols(usable),
                                  a.generated.coordinates.leftCols(usable));
  r.r2 = r2.r2;
  r.r2_rank_deficient = r2.rank_deficient;
  r.zero_variance_original = d_orig.zero_variance;
  r.zero_variance_generated = d_gen.zero_variance;
  r.dropped_negative_mass_original = a.original.dropped_negative_mass;
  r.dropped_negative_mass_generated = a.generated.dropped_negative_mass;
  return a;
}

std::string spectrum_svg(const FidelityReport& report, const std::string& title) {
  const auto& o = report.eigen_spectrum_original;
  const auto& g = report.eigen_spectrum_generated;
  const std::size_t bars = std::max(o.size(), g.size());
  double top = 0.0;
  for (double v : o) top = std::max(top, v);
  for (double v : g) top = std::max(top, v);
  if (top <= 0.0) top = 1.0;

  constexpr double kWidth = 640, kHeight = 320, kLeft = 50, kBottom = 40, kTop = 30;
  const double plot_w = kWidth - kLeft - 10;
  const double plot_h = kHeight - kBottom - kTop;
  const double slot = bars ? plot_w / static_cast<double>(bars) : plot_w;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
      << xml_escape(title) << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft - 4 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">"
      << format_double(top) << "</text>\n";
  auto bar = [&](std::size_t i, double v, double offset, const char* color) {
    const double h = plot_h * std::max(0.0, v) / top;
    svg << "<rect x=\"" << kLeft + slot * static_cast<double>(i) + offset << "\" y=\""
        << kTop + plot_h - h << "\" width=\"" << slot * 0.4 << "\" height=\"" << h
        << "\" fill=\"" << color << "\"/>\n";
  };
  for (std::size_t i = 0; i < bars; ++i) {
    if (i < o.size()) bar(i, o[i], slot * 0.1, "#4477aa");
    if (i < g.size()) bar(i, g[i], slot * 0.5, "#cc6677");
    svg << "<text x=\"" << kLeft + slot * (static_cast<double>(i) + 0.5) << "\" y=\""
        << kTop + plot_h + 12 << "\" text-anchor=\"middle\">" << i + 1 << "</text>\n";
  }
  svg << "<rect x=\"" << kWidth - 150 << "\" y=\"" << kTop << "\" width=\"10\" height=\"10\" "
      << "fill=\"#4477aa\"/><text x=\"" << kWidth - 135 << "\" y=\"" << kTop + 9
      << "\">original</text>\n";
  svg << "<rect x=\"" << kWidth - 150 << "\" y=\"" << kTop + 15
      << "\" width=\"10\" height=\"10\" fill=\"#cc6677\"/><text x=\"" << kWidth - 135
      << "\" y=\"" << kTop + 24 << "\">generated</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gesteval
