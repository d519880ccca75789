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

#ifndef GESTEVAL_SYNTH_CORPUS_H_
#define GESTEVAL_SYNTH_CORPUS_H_

#include <cstdint>

#include "gesteval/core_model.h"
#include "gesteval/dataset_pipeline.h"

namespace gesteval {

// Scripted-animation stand-in: a library of sinusoidal beat-gesture
// templates, played back one instance after another with per-instance
// amplitude and phase jitter.
struct SynthCorpusConfig {
  int templates = 12;
  int poses = 2018;
  double rate_hz = 4.0;
  // Template amplitude as a fraction of each joint's range.
  double amplitude_min = 0.05;
  double amplitude_max = 0.25;
  double frequency_min_hz = 0.2;
  double frequency_max_hz = 1.2;
  // Relative amplitude jitter and absolute phase jitter (radians) per instance.
  double amplitude_jitter = 0.2;
  double phase_jitter = 0.3;
  // Gaussian noise per pose as a fraction of each joint's range.
  double noise = 0.01;
  int min_gesture_poses = 8;
  int max_gesture_poses = 24;
  // Poses over which a new instance blends in from the previous pose.
  int blend_poses = 3;

  void validate() const;
};

// `template_seed` fixes the gesture library, `seed` the playback. Two corpora
// with the same template_seed and different seeds share gesture vocabulary.
PoseStream synth_pose_stream(const RobotProfile& profile, const SynthCorpusConfig& config,
                             std::uint64_t seed, std::uint64_t template_seed);

GestureDataset synth_corpus(const RobotProfile& profile, const SynthCorpusConfig& config,
                            int mu, std::uint64_t seed, std::uint64_t template_seed);

}  // namespace gesteval

#endif  // GESTEVAL_SYNTH_CORPUS_H_
