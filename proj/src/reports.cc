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

#include "gesteval/reports.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gesteval/text.h"

namespace gesteval {

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? number(*v) : nlohmann::json(nullptr);
}

nlohmann::json numbers(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

nlohmann::json matrix(const Eigen::MatrixXd& m) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    a.push_back(std::move(row));
  }
  return a;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const nlohmann::json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "." + std::to_string(i), out);
    return;
  }
  out << csv_cell(prefix) << ',';
  if (j.is_null()) {
  } else if (j.is_boolean()) {
    out << (j.get<bool>() ? "true" : "false");
  } else if (j.is_number_float()) {
    out << format_double(j.get<double>());
  } else if (j.is_number()) {
    out << j.dump();
  } else {
    out << csv_cell(j.get<std::string>());
  }
  out << '\n';
}

}  // namespace

nlohmann::json to_json(const FidelityReport& r) {
  return {
      {"dims", r.dims},
      {"eigen_spectrum_original", numbers(r.eigen_spectrum_original)},
      {"eigen_spectrum_generated", numbers(r.eigen_spectrum_generated)},
      {"r2", numbers(r.r2)},
      {"r2_rank_deficient", r.r2_rank_deficient},
      {"explained_variance_original", number(r.explained_variance_original)},
      {"explained_variance_generated", number(r.explained_variance_generated)},
      {"zero_variance_original", r.zero_variance_original},
      {"zero_variance_generated", r.zero_variance_generated},
      {"dropped_negative_mass_original", number(r.dropped_negative_mass_original)},
      {"dropped_negative_mass_generated", number(r.dropped_negative_mass_generated)},
  };
}

nlohmann::json to_json(const PcoaResult& r, int spectrum_length) {
  const int shown = std::min<int>(spectrum_length, static_cast<int>(r.spectrum.size()));
  std::vector<double> spectrum(r.spectrum.data(), r.spectrum.data() + shown);
  std::vector<double> retained(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
  return {
      {"dimensions", r.dimensions()},
      {"eigenvalues", numbers(retained)},
      {"spectrum", numbers(spectrum)},
      {"dropped_negative_mass", number(r.dropped_negative_mass)},
      {"explained_variance_10",
       r.dimensions() > 0 ? number(explained_variance(r, std::min(10, r.dimensions())))
                          : nlohmann::json(nullptr)},
  };
}

nlohmann::json to_json(const ProcrustesResult& r, bool include_rotation) {
  nlohmann::json j = {
      {"ss", number(r.ss)},
      {"ss_normalized", number(r.ss_normalized)},
      {"scale", number(r.scale)},
      {"scale_clamped", r.scale_clamped},
      {"mu", r.mu},
      {"dims", static_cast<int>(r.rotation.rows())},
  };
  if (include_rotation) j["rotation"] = matrix(r.rotation);
  return j;
}

nlohmann::json to_json(const MotionReport& r) {
  nlohmann::json sites = nlohmann::json::object();
  for (int s = 0; s < kSiteCount; ++s) {
    sites[std::string(kSiteNames[s])] = {{"jerk", optional_number(r.sites[s].jerk)},
                                         {"lpath", optional_number(r.sites[s].lpath)}};
  }
  return {
      {"mu", r.mu},
      {"units", r.units},
      {"sites", sites},
      {"head_jerk_yaw", optional_number(r.head_jerk_yaw)},
      {"head_jerk_pitch", optional_number(r.head_jerk_pitch)},
  };
}

nlohmann::json to_json(const FgdResult& r) {
  nlohmann::json j = {{"value", number(r.value)}, {"jitter_applied", r.jitter_applied}};
  if (r.bootstrap) {
    j["bootstrap"] = {
        {"replicates", r.bootstrap->replicates},
        {"seed", r.bootstrap->seed},
        {"E", number(r.bootstrap->mean)},
        {"sigma", number(r.bootstrap->std)},
        {"interpretation", "mean and standard deviation over resamples of both datasets"},
    };
  } else {
    j["bootstrap"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const FeatureStats& s) {
  std::vector<double> mean(s.mean.data(), s.mean.data() + s.mean.size());
  return {{"n", s.n}, {"mean", numbers(mean)}, {"covariance", matrix(s.covariance)}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string flatten_csv(const nlohmann::json& j) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(j, "", out);
  return out.str();
}

}  // namespace gesteval
