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

#ifndef GESTEVAL_EVALUATION_H_
#define GESTEVAL_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "gesteval/core_model.h"
#include "gesteval/fgd.h"
#include "gesteval/gmm.h"
#include "gesteval/motion_metrics.h"
#include "gesteval/pcoa.h"
#include "gesteval/procrustes.h"

namespace gesteval {

struct EvaluationOptions {
  int dims = 10;
  int spectrum_length = 28;
  int bootstrap = 0;
  std::uint64_t seed = 0;
  ProcrustesOptions procrustes;
};

enum class StageState { kOk, kFailed, kSkipped };

struct StageStatus {
  StageState state = StageState::kSkipped;
  std::string reason;
};

struct EvaluationSummary {
  int mu = 0;
  int n_original = 0;
  int n_generated = 0;
  std::string original_source;
  std::string generated_source;
  EvaluationOptions options;

  std::optional<FidelityAnalysis> fidelity;
  std::optional<ProcrustesResult> originality;
  std::optional<MotionReport> motion_original;
  std::optional<MotionReport> motion_generated;
  std::optional<FgdResult> fgd;

  StageStatus fidelity_stage, originality_stage, motion_original_stage,
      motion_generated_stage, fgd_stage;

  bool any_failed() const;
};

// Throws StructuralError when the datasets disagree on mu or dt, or when the
// model dimension does not match them. Stage errors are recorded in the
// summary and the remaining stages still run. Without a model FGD is marked
// skipped.
EvaluationSummary evaluate(const GestureDataset& original, const GestureDataset& generated,
                           const GmmModel* model, const RobotProfile& profile,
                           const EvaluationOptions& options = {});

// Byte-stable summary document (no clocks, sorted keys).
nlohmann::json to_json(const EvaluationSummary& s);

// Spectrum side artifact: 'rank,original,generated'.
std::string spectrum_csv(const FidelityReport& r);

}  // namespace gesteval

#endif  // GESTEVAL_EVALUATION_H_
