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

#include "gesteval/synth_corpus.h"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gesteval/errors.h"
#include "gesteval/rng.h"

namespace gesteval {

namespace {

struct JointWave {
  double center = 0.0;
  double amplitude = 0.0;
  double frequency_hz = 0.0;
  double phase = 0.0;
};

using GestureTemplate = std::array<JointWave, kJointCount>;

std::vector<GestureTemplate> make_templates(const RobotProfile& profile,
                                            const SynthCorpusConfig& c, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<GestureTemplate> out(c.templates);
  for (auto& t : out) {
    for (int j = 0; j < kJointCount; ++j) {
      const Interval& lim = profile.limit(j);
      const double w = lim.width();
      t[j].center = rng.uniform(lim.lo + 0.3 * w, lim.hi - 0.3 * w);
      t[j].amplitude = w * rng.uniform(c.amplitude_min, c.amplitude_max);
      t[j].frequency_hz = rng.uniform(c.frequency_min_hz, c.frequency_max_hz);
      t[j].phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
  }
  return out;
}

}  // namespace

void SynthCorpusConfig::validate() const {
  if (templates < 1) throw StructuralError("synth corpus needs at least one template");
  if (poses < 1) throw StructuralError("synth corpus needs at least one pose");
  if (!(rate_hz > 0.0)) throw StructuralError("synth corpus rate must be positive");
  if (min_gesture_poses < 1 || max_gesture_poses < min_gesture_poses)
    throw StructuralError("synth corpus gesture length range is invalid");
  if (amplitude_min < 0.0 || amplitude_max < amplitude_min)
    throw StructuralError("synth corpus amplitude range is invalid");
  if (frequency_min_hz < 0.0 || frequency_max_hz < frequency_min_hz)
    throw StructuralError("synth corpus frequency range is invalid");
  if (amplitude_jitter < 0.0 || phase_jitter < 0.0 || noise < 0.0 || blend_poses < 0)
    throw StructuralError("synth corpus jitter and noise must be non-negative");
}

PoseStream synth_pose_stream(const RobotProfile& profile, const SynthCorpusConfig& config,
                             std::uint64_t seed, std::uint64_t template_seed) {
  config.validate();
  const auto library = make_templates(profile, config, template_seed);
  CounterRng rng(seed);
  std::vector<Pose> poses;
  poses.reserve(config.poses);
  const double dt = 1.0 / config.rate_hz;
  while (static_cast<int>(poses.size()) < config.poses) {
    const GestureTemplate& t = library[rng.below(library.size())];
    const int span = config.max_gesture_poses - config.min_gesture_poses + 1;
    const int length = config.min_gesture_poses + static_cast<int>(rng.below(span));
    const double gain = 1.0 + config.amplitude_jitter * rng.uniform(-1.0, 1.0);
    const double shift = config.phase_jitter * rng.uniform(-1.0, 1.0);
    const std::array<double, kJointCount> previous =
        poses.empty() ? std::array<double, kJointCount>{} : poses.back().values;
    for (int k = 0; k < length && static_cast<int>(poses.size()) < config.poses; ++k) {
      Pose p;
      const double local = k * dt;
      for (int j = 0; j < kJointCount; ++j) {
        const JointWave& w = t[j];
        double v = w.center + gain * w.amplitude *
                                  std::sin(2.0 * std::numbers::pi * w.frequency_hz * local +
                                           w.phase + shift);
        v += config.noise * profile.limit(j).width() * rng.normal();
        if (!poses.empty() && k < config.blend_poses) {
          const double a = static_cast<double>(k + 1) / (config.blend_poses + 1);
          v = (1.0 - a) * previous[j] + a * v;
        }
        p.values[j] = v;
      }
      p = validate_pose(p, profile);
      p.timestamp = static_cast<double>(poses.size()) * dt;
      poses.push_back(p);
    }
  }
  return PoseStream(std::move(poses), config.rate_hz);
}

GestureDataset synth_corpus(const RobotProfile& profile, const SynthCorpusConfig& config,
                            int mu, std::uint64_t seed, std::uint64_t template_seed) {
  return window(synth_pose_stream(profile, config, seed, template_seed), mu, 0,
                "synth-" + std::to_string(template_seed) + "-" + std::to_string(seed));
}

}  // namespace gesteval
