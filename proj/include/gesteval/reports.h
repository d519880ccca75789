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

#ifndef GESTEVAL_REPORTS_H_
#define GESTEVAL_REPORTS_H_

#include <string>

#include <json.hpp>

#include "gesteval/fgd.h"
#include "gesteval/motion_metrics.h"
#include "gesteval/pcoa.h"
#include "gesteval/procrustes.h"

namespace gesteval {

nlohmann::json to_json(const FidelityReport& r);
nlohmann::json to_json(const PcoaResult& r, int spectrum_length = 28);
nlohmann::json to_json(const ProcrustesResult& r, bool include_rotation = true);
nlohmann::json to_json(const MotionReport& r);
nlohmann::json to_json(const FgdResult& r);
nlohmann::json to_json(const FeatureStats& s);

// Indented JSON with sorted keys and a trailing newline.
std::string dump_json(const nlohmann::json& j);

// One 'key,value' line per scalar leaf; nested keys joined with '.', array
// elements by index.
std::string flatten_csv(const nlohmann::json& j);

}  // namespace gesteval

#endif  // GESTEVAL_REPORTS_H_
