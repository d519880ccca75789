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

#include "gesteval/evaluation.h"

#include <algorithm>
#include <future>
#include <sstream>

#include "gesteval/errors.h"
#include "gesteval/reports.h"
#include "gesteval/text.h"

#ifndef GESTEVAL_VERSION
#define GESTEVAL_VERSION "unknown"
#endif

namespace gesteval {

namespace {

template <typename F>
auto run_stage(StageStatus& status, F&& f) -> std::optional<decltype(f())> {
  try {
    auto value = f();
    status = {StageState::kOk, ""};
    return value;
  } catch (const std::exception& e) {
    status = {StageState::kFailed, e.what()};
    return std::nullopt;
  }
}

nlohmann::json stage_json(const StageStatus& s) {
  switch (s.state) {
    case StageState::kOk:
      return {{"status", "ok"}};
    case StageState::kFailed:
      return {{"status", "failed"}, {"reason", s.reason}};
    case StageState::kSkipped:
      break;
  }
  return {{"status", "skipped"}, {"reason", s.reason}};
}

}  // namespace

bool EvaluationSummary::any_failed() const {
  for (const StageStatus* s : {&fidelity_stage, &originality_stage, &motion_original_stage,
                               &motion_generated_stage, &fgd_stage})
    if (s->state == StageState::kFailed) return true;
  return false;
}

EvaluationSummary evaluate(const GestureDataset& original, const GestureDataset& generated,
                           const GmmModel* model, const RobotProfile& profile,
                           const EvaluationOptions& options) {
  if (original.mu() != generated.mu())
    throw StructuralError("mu mismatch: original has mu = " + std::to_string(original.mu()) +
                          ", generated has mu = " + std::to_string(generated.mu()));
  if (std::abs(original.dt() - generated.dt()) > 1e-9 * original.dt())
    throw StructuralError("sample period mismatch between datasets");
  if (model && model->dimension() != original.dimension())
    throw StructuralError("model dimension " + std::to_string(model->dimension()) +
                          " does not match dataset dimension " +
                          std::to_string(original.dimension()));
  if (options.dims < 1) throw StructuralError("dims must be at least 1");

  EvaluationSummary s;
  s.mu = original.mu();
  s.n_original = original.size();
  s.n_generated = generated.size();
  s.original_source = original.source_tag();
  s.generated_source = generated.source_tag();
  s.options = options;

  auto motion_o = std::async(std::launch::async, [&] {
    StageStatus st;
    auto r = run_stage(st, [&] { return motion_report(original, profile); });
    return std::make_pair(st, r);
  });
  auto motion_g = std::async(std::launch::async, [&] {
    StageStatus st;
    auto r = run_stage(st, [&] { return motion_report(generated, profile); });
    return std::make_pair(st, r);
  });
  std::future<std::pair<StageStatus, std::optional<FgdResult>>> fgd_job;
  if (model) {
    fgd_job = std::async(std::launch::async, [&] {
      StageStatus st;
      auto r = run_stage(st, [&] {
        return fgd(*model, original, generated, options.bootstrap, options.seed);
      });
      return std::make_pair(st, r);
    });
  } else {
    s.fgd_stage = {StageState::kSkipped, "no reference model given"};
  }

  const Eigen::MatrixXd xo = as_matrix(original);
  const Eigen::MatrixXd xg = as_matrix(generated);
  s.fidelity = run_stage(s.fidelity_stage, [&] {
    return fidelity_analysis(xo, xg, options.dims, options.spectrum_length);
  });
  if (s.fidelity) {
    s.originality = run_stage(s.originality_stage, [&] {
      const int l = std::min({options.dims, s.fidelity->original.dimensions(),
                              s.fidelity->generated.dimensions()});
      if (l < 1) throw DegenerateError("no retained principal coordinates");
      return procrustes(s.fidelity->original.coordinates.leftCols(l),
                        s.fidelity->generated.coordinates.leftCols(l), s.mu,
                        options.procrustes);
    });
  } else {
    s.originality_stage = {StageState::kSkipped, "fidelity stage failed"};
  }

  std::tie(s.motion_original_stage, s.motion_original) = motion_o.get();
  std::tie(s.motion_generated_stage, s.motion_generated) = motion_g.get();
  if (model) std::tie(s.fgd_stage, s.fgd) = fgd_job.get();
  return s;
}

nlohmann::json to_json(const EvaluationSummary& s) {
  nlohmann::json j;
  j["format"] = "gesteval-summary";
  j["version"] = 1;
  j["run"] = {
      {"gesteval_version", GESTEVAL_VERSION},
      {"mu", s.mu},
      {"n_original", s.n_original},
      {"n_generated", s.n_generated},
      {"original_source", s.original_source},
      {"generated_source", s.generated_source},
      {"dims", s.options.dims},
      {"bootstrap", s.options.bootstrap},
      {"seed", s.options.seed},
      {"proper_rotation", s.options.procrustes.proper_rotation},
  };
  j["fidelity"] = s.fidelity ? to_json(s.fidelity->report) : nlohmann::json(nullptr);
  j["originality"] = s.originality ? to_json(*s.originality, false) : nlohmann::json(nullptr);
  j["motion"] = {
      {"original", s.motion_original ? to_json(*s.motion_original) : nlohmann::json(nullptr)},
      {"generated",
       s.motion_generated ? to_json(*s.motion_generated) : nlohmann::json(nullptr)},
  };
  j["fgd"] = s.fgd ? to_json(*s.fgd) : nlohmann::json(nullptr);
  j["stages"] = {
      {"fidelity", stage_json(s.fidelity_stage)},
      {"originality", stage_json(s.originality_stage)},
      {"motion_original", stage_json(s.motion_original_stage)},
      {"motion_generated", stage_json(s.motion_generated_stage)},
      {"fgd", stage_json(s.fgd_stage)},
  };
  return j;
}

std::string spectrum_csv(const FidelityReport& r) {
  std::ostringstream out;
  out << "rank,original,generated\n";
  const std::size_t n =
      std::max(r.eigen_spectrum_original.size(), r.eigen_spectrum_generated.size());
  for (std::size_t i = 0; i < n; ++i) {
    out << i + 1 << ',';
    if (i < r.eigen_spectrum_original.size()) out << format_double(r.eigen_spectrum_original[i]);
    out << ',';
    if (i < r.eigen_spectrum_generated.size())
      out << format_double(r.eigen_spectrum_generated[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace gesteval
